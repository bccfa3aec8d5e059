#pragma once

#include <limits>
#include <string_view>

#include <Eigen/Dense>

#include "gripkit/kinematics.hpp"
#include "gripkit/perception.hpp"

namespace gripkit {

enum class Approach { Horizontal, Vertical };

enum class Verdict { Horizontal, Vertical, Ungraspable };

enum class DecisionReason {
  SmallHeight,             ///< flat object on a surface, approach from above
  DominantVerticalExtent,  ///< tall object grasped from the side
  HorizontalFit,           ///< side grasp fits although height does not dominate
  HorizontalInfeasible,    ///< side grasp too wide or out of reach, from above instead
  ExceedsAperture,
};

/// Axis-aligned box (global frame, meters) of object centroids the arm can
/// reach with a horizontal approach. Unbounded unless configured.
struct WorkspaceLimits {
  Eigen::Vector3d min_corner = Eigen::Vector3d::Constant(-std::numeric_limits<double>::infinity());
  Eigen::Vector3d max_corner = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());

  bool contains(const Eigen::Vector3d& p) const {
    return (p.array() >= min_corner.array()).all() && (p.array() <= max_corner.array()).all();
  }
};

struct ApproachPolicy {
  double small_height_threshold_mm = 10.0;
};

struct ApproachDecision {
  Verdict verdict;
  DecisionReason reason;
  double grasp_width_m;  ///< extent across the closing axis for the chosen approach
};

/// Horizontal grasps approach along global x and close along y; vertical
/// grasps may rotate about z and close across the narrower lateral extent.
inline double horizontal_grasp_width(const Estimate& est) { return est.extents.y(); }
inline double vertical_grasp_width(const Estimate& est) { return std::min(est.extents.x(), est.extents.y()); }

inline double grasp_width(const Estimate& est, Approach approach) {
  return approach == Approach::Horizontal ? horizontal_grasp_width(est) : vertical_grasp_width(est);
}

/// Rule set, evaluated in order:
///  (a) height <= small-height threshold -> Vertical (if it fits the aperture)
///  (b) horizontal width fits the open aperture and the centroid is reachable -> Horizontal
///  (c) narrower lateral extent fits -> Vertical
///  (d) otherwise Ungraspable
ApproachDecision decide_approach(const Estimate& est, const Geometry& geom, const WorkspaceLimits& limits = {},
                                 const ApproachPolicy& policy = {});

std::string_view to_string(Approach a);
std::string_view to_string(Verdict v);
std::string_view to_string(DecisionReason r);
std::string_view to_string(Axis a);

}  // namespace gripkit
