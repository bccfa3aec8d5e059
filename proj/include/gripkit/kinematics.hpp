#pragma once

// Slider-crank driven finger pair. A motor crank of length r1 pushes a rod of
// length r2 whose end B slides along the gripper y-axis; the slider sets the
// base of two isosceles fingers (leg l, base b) whose tips rotate about O2.
// Lengths are millimeters, angles radians.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gripkit/errors.hpp"

namespace gripkit {

template <typename Scalar>
struct GripperGeometry {
  Scalar r1;            ///< crank length
  Scalar r2;            ///< connecting rod length
  Scalar e;             ///< frame offset
  Scalar c;             ///< frame offset (only e - c enters the model)
  Scalar d;             ///< lateral offset of the finger base
  Scalar l;             ///< finger leg length
  Scalar delta_x;       ///< O2 -> O1 distance along x
  Scalar delta_y;       ///< O2 -> O1 distance along y
  Scalar theta_open;    ///< motor angle, fully open
  Scalar theta_closed;  ///< motor angle, fully closed

  template <typename Other>
  GripperGeometry<Other> cast() const {
    return {Other(r1),      Other(r2),      Other(e),          Other(c),
            Other(d),       Other(l),       Other(delta_x),    Other(delta_y),
            Other(theta_open), Other(theta_closed)};
  }
};

using Geometry = GripperGeometry<double>;

/// Kinematic snapshot at one motor angle.
template <typename Scalar>
struct FingerState {
  Scalar theta;
  Scalar y_b;
  Scalar delta;
  Scalar b;
  Scalar alpha;
  Scalar x_left;
  Scalar x_right;
  Scalar y_tip;

  Scalar aperture() const { return x_right - x_left; }
};

template <typename Scalar>
struct FingertipPositions {
  Scalar x_left;
  Scalar x_right;
  Scalar y_tip;
};

/// Derivatives of the left fingertip with respect to the motor angle (mm/rad).
template <typename Scalar>
struct FingertipJacobian {
  Scalar dx_left;
  Scalar dy_tip;
};

template <typename Scalar>
struct MotorTrajectory {
  std::vector<Scalar> samples;
  Scalar step = Scalar(0.015);

  std::size_t size() const { return samples.size(); }
  Scalar front() const { return samples.front(); }
  Scalar back() const { return samples.back(); }
};

inline constexpr double kDefaultStep = 0.015;
inline constexpr double kSlidingClosedTheta = -1.9;

/// Throws ConfigError if `geom` violates the mechanism invariants: r2 > r1 > 0,
/// d > 0, l > 0, theta_closed < theta_open, and b <= 2l over the whole
/// operating window.
template <typename Scalar>
void validate(const GripperGeometry<Scalar>& geom);

// y_B = r1 cos(theta) + sqrt(r2^2 - r1^2 sin^2(theta))
template <typename Scalar>
Scalar slider_coordinate(const GripperGeometry<Scalar>& geom, Scalar theta) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar s = sin(theta);
  const Scalar radicand = geom.r2 * geom.r2 - geom.r1 * geom.r1 * s * s;
  if (!(radicand > Scalar(0))) {
    throw DomainError("slider-crank radicand is not positive; r2 must exceed r1");
  }
  return geom.r1 * cos(theta) + sqrt(radicand);
}

template <typename Scalar>
Scalar slider_displacement(const GripperGeometry<Scalar>& geom, Scalar theta) {
  return geom.e - geom.c - slider_coordinate(geom, theta);
}

template <typename Scalar>
Scalar base_length(const GripperGeometry<Scalar>& geom, Scalar delta) {
  using std::hypot;
  return hypot(geom.d, delta);
}

/// alpha = asin(delta / b) + acos(b / 2l). Throws DomainError when the
/// isosceles finger cannot close over its base (b > 2l) or b is not positive.
template <typename Scalar>
Scalar fingertip_angle(const GripperGeometry<Scalar>& geom, Scalar delta, Scalar b) {
  using std::acos;
  using std::asin;
  if (!(b > Scalar(0))) {
    throw DomainError("finger base length must be positive");
  }
  if (b > Scalar(2) * geom.l) {
    throw DomainError("finger base length exceeds twice the leg length");
  }
  const Scalar ratio = std::clamp(delta / b, Scalar(-1), Scalar(1));
  return asin(ratio) + acos(b / (Scalar(2) * geom.l));
}

template <typename Scalar>
FingertipPositions<Scalar> fingertip_positions(const GripperGeometry<Scalar>& geom, Scalar alpha) {
  using std::cos;
  using std::sin;
  const Scalar reach = geom.l * cos(alpha);
  return {reach - geom.delta_x, geom.delta_x - reach, geom.l * sin(alpha) + geom.delta_y};
}

template <typename Scalar>
FingerState<Scalar> forward_kinematics(const GripperGeometry<Scalar>& geom, Scalar theta) {
  FingerState<Scalar> s;
  s.theta = theta;
  s.y_b = slider_coordinate(geom, theta);
  s.delta = geom.e - geom.c - s.y_b;
  s.b = base_length(geom, s.delta);
  s.alpha = fingertip_angle(geom, s.delta, s.b);
  const auto tip = fingertip_positions(geom, s.alpha);
  s.x_left = tip.x_left;
  s.x_right = tip.x_right;
  s.y_tip = tip.y_tip;
  return s;
}

template <typename Scalar>
Scalar aperture(const GripperGeometry<Scalar>& geom, Scalar theta) {
  return forward_kinematics(geom, theta).aperture();
}

template <typename Scalar>
bool in_operating_window(const GripperGeometry<Scalar>& geom, Scalar theta) {
  return theta >= geom.theta_closed && theta <= geom.theta_open;
}

/// Motor angle in [theta_closed, theta_open] at which the fingertip aperture
/// equals `target_aperture`. Bisection; relies on the aperture being monotone
/// over the operating window. Throws OutOfRange outside the achievable span.
template <typename Scalar>
Scalar inverse_kinematics(const GripperGeometry<Scalar>& geom, Scalar target_aperture) {
  using std::abs;
  constexpr int kMaxIterations = 200;
  const Scalar tolerance = Scalar(1e-6);

  Scalar lo = geom.theta_closed;
  Scalar hi = geom.theta_open;
  Scalar f_lo = aperture(geom, lo) - target_aperture;
  Scalar f_hi = aperture(geom, hi) - target_aperture;
  if (f_lo == Scalar(0)) return lo;
  if (f_hi == Scalar(0)) return hi;
  if ((f_lo > Scalar(0)) == (f_hi > Scalar(0))) {
    throw OutOfRange("target aperture " + std::to_string(static_cast<double>(target_aperture)) +
                     " mm is outside the achievable aperture window");
  }

  for (int i = 0; i < kMaxIterations; ++i) {
    const Scalar mid = lo + (hi - lo) / Scalar(2);
    if (mid == lo || mid == hi) break;
    const Scalar f_mid = aperture(geom, mid) - target_aperture;
    if (f_mid == Scalar(0)) return mid;
    if ((f_mid > Scalar(0)) == (f_lo > Scalar(0))) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }

  const bool take_lo = abs(f_lo) <= abs(f_hi);
  if (abs(take_lo ? f_lo : f_hi) > tolerance) {
    throw DomainError("aperture is not monotone over the operating window");
  }
  return take_lo ? lo : hi;
}

/// Analytic derivative of the fingertip chain. Throws DomainError where the
/// chain is singular (b reaches 2l).
template <typename Scalar>
FingertipJacobian<Scalar> fingertip_jacobian(const GripperGeometry<Scalar>& geom, Scalar theta) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const auto s = forward_kinematics(geom, theta);

  const Scalar sin_t = sin(theta);
  const Scalar cos_t = cos(theta);
  const Scalar root = sqrt(geom.r2 * geom.r2 - geom.r1 * geom.r1 * sin_t * sin_t);
  const Scalar dy_b = -geom.r1 * sin_t - geom.r1 * geom.r1 * sin_t * cos_t / root;
  const Scalar d_delta = -dy_b;
  const Scalar d_b = s.delta / s.b * d_delta;

  const Scalar slack = Scalar(4) * geom.l * geom.l - s.b * s.b;
  if (!(slack > Scalar(0))) {
    throw DomainError("fingertip Jacobian is singular where b reaches 2l");
  }
  const Scalar d_alpha = d_delta * geom.d / (s.b * s.b) - d_b / sqrt(slack);

  return {-geom.l * sin(s.alpha) * d_alpha, geom.l * cos(s.alpha) * d_alpha};
}

/// Inclusive sampling from `from` towards `to` in increments of `step`; the
/// final sample is exactly `to`.
template <typename Scalar>
MotorTrajectory<Scalar> sample_trajectory(Scalar from, Scalar to, Scalar step = Scalar(kDefaultStep)) {
  using std::abs;
  using std::ceil;
  if (!(step > Scalar(0))) {
    throw InvalidRange("trajectory step must be positive");
  }
  if (from == to) {
    throw InvalidRange("trajectory endpoints coincide");
  }
  const Scalar span = abs(to - from);
  const Scalar direction = to > from ? Scalar(1) : Scalar(-1);
  // absorbs representation error in span / step (0.6 / 0.015 is not exactly 40)
  const auto intervals = static_cast<std::size_t>(ceil(span / step - Scalar(1e-9)));

  MotorTrajectory<Scalar> traj;
  traj.step = step;
  traj.samples.reserve(intervals + 1);
  for (std::size_t k = 0; k < intervals; ++k) {
    traj.samples.push_back(from + direction * Scalar(k) * step);
  }
  traj.samples.push_back(to);
  return traj;
}

template <typename Scalar>
void validate(const GripperGeometry<Scalar>& geom) {
  using std::abs;
  using std::hypot;
  const auto fail = [](const std::string& why) { throw ConfigError("invalid gripper geometry: " + why); };
  const GripperGeometry<Scalar>& g = geom;
  for (Scalar v : {g.r1, g.r2, g.e, g.c, g.d, g.l, g.delta_x, g.delta_y, g.theta_open, g.theta_closed}) {
    if (!std::isfinite(static_cast<double>(v))) fail("non-finite value");
  }
  if (!(g.r1 > Scalar(0))) fail("r1 must be positive");
  if (!(g.r2 > g.r1)) fail("r2 must exceed r1");
  if (!(g.d > Scalar(0))) fail("d must be positive");
  if (!(g.l > Scalar(0))) fail("l must be positive");
  if (!(g.theta_closed < g.theta_open)) fail("theta_closed must be below theta_open");

  // y_B is even and monotone on [0, pi], so |delta| peaks at a window
  // endpoint or at one of the extrema 0, +-pi when they lie inside.
  const Scalar pi = Scalar(3.14159265358979323846264338327950288L);
  std::vector<Scalar> probes{g.theta_closed, g.theta_open};
  for (Scalar candidate : {Scalar(0), pi, -pi}) {
    if (candidate > g.theta_closed && candidate < g.theta_open) probes.push_back(candidate);
  }
  for (Scalar theta : probes) {
    const Scalar b = hypot(g.d, slider_displacement(g, theta));
    if (b > Scalar(2) * g.l) fail("finger base exceeds 2l inside the operating window");
  }
}

}  // namespace gripkit
