#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gripkit/approach.hpp"
#include "gripkit/capacity.hpp"
#include "gripkit/kinematics.hpp"
#include "gripkit/perception.hpp"

namespace gripkit {

enum class GraspKind { Envelope, Pinch };

struct CompensationSample {
  double theta;
  double displacement_mm;  ///< arm translation along the grasp axis
};

struct GraspPlan {
  GraspKind kind = GraspKind::Envelope;
  Approach approach = Approach::Horizontal;
  MotorTrajectory<double> motor_trajectory;
  std::vector<CompensationSample> arm_compensation;
  double residual_uncompensated_mm = 0.0;
  double target_theta = 0.0;
  double grasp_width_mm = 0.0;
  double open_aperture_mm = 0.0;
  Eigen::Vector3d grasp_center_m = Eigen::Vector3d::Zero();
  std::optional<double> fingertip_height_mm;  ///< pinch only, world height of the cushions
  std::vector<std::string> warnings;
};

inline constexpr double kLargeObjectDiameterMm = 80.0;
inline constexpr double kSmallObjectHeightMm = 10.0;

struct EnvelopeOptions {
  double squeeze_margin_mm = 5.0;
  /// Share of the slider travel deliberately left to the fingers.
  double residual_fraction = 0.0;
  double min_diameter_mm = kLargeObjectDiameterMm;
  Approach approach = Approach::Horizontal;
  std::optional<double> start_theta;  ///< defaults to theta_open
};

/// Closes onto an object of at least min_diameter_mm while the arm moves
/// against the slider so the grasp root stays put:
///   compensation(theta) = -(1 - residual) * (delta(theta) - delta(start)).
GraspPlan plan_envelope_grasp(const Geometry& geom, const Estimate& est, const EnvelopeOptions& options = {});
GraspPlan plan_envelope_grasp(const Geometry& geom, const Estimate& est, double squeeze_margin_mm);

struct PinchOptions {
  double small_height_threshold_mm = kSmallObjectHeightMm;
  std::optional<double> start_theta;  ///< defaults to theta_open
};

/// Vertical fingertip pinch for flat objects. The arm follows the fingertip
/// retraction, compensation(theta) = y_tip(start) - y_tip(theta), so the
/// cushions stay at the object centroid height. `surface_y_mm` is the
/// supporting surface height in the same world frame as the estimate.
GraspPlan plan_pinch_grasp(const Geometry& geom, const Estimate& est, double surface_y_mm,
                           const PinchOptions& options = {});

struct ValidationReport {
  double diameter_mm = 0.0;
  double capacity_kg = 0.0;
  double payload_margin_kg = 0.0;
  bool payload_ok = false;
  std::optional<double> predicted_deflection_mm;  ///< horizontal approach only
  bool aperture_ok = false;
  bool passed = false;
};

ValidationReport validate_plan(const GraspPlan& plan, const Estimate& est, double mass_kg,
                               const CapacityModel& capacity, bool hinged = true);

nlohmann::json to_json(const GraspPlan& plan);
nlohmann::json to_json(const ValidationReport& report);

inline constexpr std::string_view kCompensationCsvHeader = "theta,arm_compensation_mm";
std::string compensation_csv(const GraspPlan& plan);

std::string_view to_string(GraspKind k);

}  // namespace gripkit
