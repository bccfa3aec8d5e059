#include "gripkit/approach.hpp"

namespace gripkit {

ApproachDecision decide_approach(const Estimate& est, const Geometry& geom, const WorkspaceLimits& limits,
                                 const ApproachPolicy& policy) {
  const double max_aperture_m = aperture(geom, geom.theta_open) * 1e-3;
  const double height_mm = est.height() * 1e3;
  const double side = horizontal_grasp_width(est);
  const double top = vertical_grasp_width(est);

  if (height_mm <= policy.small_height_threshold_mm) {
    if (top <= max_aperture_m) return {Verdict::Vertical, DecisionReason::SmallHeight, top};
    return {Verdict::Ungraspable, DecisionReason::ExceedsAperture, top};
  }
  if (side <= max_aperture_m && limits.contains(est.centroid)) {
    const auto reason =
        est.dominant_axis == Axis::Z ? DecisionReason::DominantVerticalExtent : DecisionReason::HorizontalFit;
    return {Verdict::Horizontal, reason, side};
  }
  if (top <= max_aperture_m) return {Verdict::Vertical, DecisionReason::HorizontalInfeasible, top};
  return {Verdict::Ungraspable, DecisionReason::ExceedsAperture, top};
}

std::string_view to_string(Approach a) { return a == Approach::Horizontal ? "horizontal" : "vertical"; }

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Horizontal: return "horizontal";
    case Verdict::Vertical: return "vertical";
    case Verdict::Ungraspable: return "ungraspable";
  }
  return "?";
}

std::string_view to_string(DecisionReason r) {
  switch (r) {
    case DecisionReason::SmallHeight: return "small_height";
    case DecisionReason::DominantVerticalExtent: return "dominant_vertical_extent";
    case DecisionReason::HorizontalFit: return "horizontal_fit";
    case DecisionReason::HorizontalInfeasible: return "horizontal_infeasible";
    case DecisionReason::ExceedsAperture: return "exceeds_aperture";
  }
  return "?";
}

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
  }
  return "?";
}

}  // namespace gripkit
