#include "gripkit/planner.hpp"

#include <cmath>

#include "gripkit/format.hpp"

namespace gripkit {

namespace {

constexpr double kMaxCompensationJumpMm = 5.0;
// m -> mm conversion noise on the size class boundary
constexpr double kSizeSlackMm = 1e-6;

MotorTrajectory<double> trajectory(double start, double target) {
  if (start == target) return {{start}, kDefaultStep};
  return sample_trajectory(start, target, kDefaultStep);
}

void check_continuity(GraspPlan& plan) {
  for (std::size_t i = 1; i < plan.arm_compensation.size(); ++i) {
    const double jump = std::abs(plan.arm_compensation[i].displacement_mm - plan.arm_compensation[i - 1].displacement_mm);
    if (!(jump < kMaxCompensationJumpMm)) {
      plan.warnings.push_back("arm compensation jumps " + format_number(jump) + " mm at theta " +
                              format_number(plan.arm_compensation[i].theta));
    }
  }
}

}  // namespace

GraspPlan plan_envelope_grasp(const Geometry& geom, const Estimate& est, const EnvelopeOptions& options) {
  if (!(options.residual_fraction >= 0.0 && options.residual_fraction <= 1.0)) {
    throw InvalidRange("residual fraction must lie in [0, 1]");
  }
  GraspPlan plan;
  plan.kind = GraspKind::Envelope;
  plan.approach = options.approach;
  plan.grasp_center_m = est.centroid;
  plan.grasp_width_mm = grasp_width(est, options.approach) * 1e3;
  plan.open_aperture_mm = aperture(geom, geom.theta_open);

  if (plan.grasp_width_mm > plan.open_aperture_mm) {
    throw PlanningError(PlanningFailure::ObjectTooLarge,
                        "object width " + format_number(plan.grasp_width_mm) + " mm exceeds the open aperture " +
                            format_number(plan.open_aperture_mm) + " mm");
  }
  if (plan.grasp_width_mm < options.min_diameter_mm - kSizeSlackMm) {
    throw PlanningError(PlanningFailure::ObjectTooSmall,
                        "object width " + format_number(plan.grasp_width_mm) + " mm is below the envelope class (" +
                            format_number(options.min_diameter_mm) + " mm); use a pinch grasp");
  }

  const double target_aperture = plan.grasp_width_mm - options.squeeze_margin_mm;
  if (target_aperture <= aperture(geom, geom.theta_closed)) {
    plan.target_theta = geom.theta_closed;
    plan.warnings.push_back("squeeze target below the closed aperture; clamped to theta_closed");
  } else if (target_aperture >= plan.open_aperture_mm) {
    plan.target_theta = geom.theta_open;
  } else {
    plan.target_theta = inverse_kinematics(geom, target_aperture);
  }

  const double start = options.start_theta.value_or(geom.theta_open);
  plan.motor_trajectory = trajectory(start, plan.target_theta);

  const double keep = 1.0 - options.residual_fraction;
  const double delta_start = slider_displacement(geom, start);
  for (double theta : plan.motor_trajectory.samples) {
    const double travel = slider_displacement(geom, theta) - delta_start;
    plan.arm_compensation.push_back({theta, -keep * travel + 0.0});
  }
  plan.residual_uncompensated_mm =
      options.residual_fraction * std::abs(slider_displacement(geom, plan.target_theta) - delta_start);
  check_continuity(plan);
  return plan;
}

GraspPlan plan_envelope_grasp(const Geometry& geom, const Estimate& est, double squeeze_margin_mm) {
  EnvelopeOptions options;
  options.squeeze_margin_mm = squeeze_margin_mm;
  return plan_envelope_grasp(geom, est, options);
}

GraspPlan plan_pinch_grasp(const Geometry& geom, const Estimate& est, double surface_y_mm,
                           const PinchOptions& options) {
  const double height_mm = est.height() * 1e3;
  if (height_mm > options.small_height_threshold_mm) {
    throw PlanningError(PlanningFailure::NotPinchable,
                        "object height " + format_number(height_mm) + " mm exceeds the pinch class (" +
                            format_number(options.small_height_threshold_mm) + " mm)");
  }
  GraspPlan plan;
  plan.kind = GraspKind::Pinch;
  plan.approach = Approach::Vertical;
  plan.grasp_center_m = est.centroid;
  plan.grasp_width_mm = vertical_grasp_width(est) * 1e3;
  plan.open_aperture_mm = aperture(geom, geom.theta_open);
  if (plan.grasp_width_mm > plan.open_aperture_mm) {
    throw PlanningError(PlanningFailure::ObjectTooLarge, "object does not fit between the open fingertips");
  }

  // cushion centers on the object's mid-height
  const double fingertip_height = est.centroid.z() * 1e3;
  if (fingertip_height < surface_y_mm) {
    throw PlanningError(PlanningFailure::SurfaceConflict,
                        "fingertips would have to reach " + format_number(fingertip_height) +
                            " mm, below the surface at " + format_number(surface_y_mm) + " mm");
  }
  plan.fingertip_height_mm = fingertip_height;

  const double start = options.start_theta.value_or(geom.theta_open);
  plan.target_theta = geom.theta_closed;
  plan.motor_trajectory = trajectory(start, plan.target_theta);
  const double y_start = forward_kinematics(geom, start).y_tip;
  for (double theta : plan.motor_trajectory.samples) {
    plan.arm_compensation.push_back({theta, y_start - forward_kinematics(geom, theta).y_tip + 0.0});
  }
  check_continuity(plan);
  return plan;
}

ValidationReport validate_plan(const GraspPlan& plan, const Estimate& est, double mass_kg,
                               const CapacityModel& capacity, bool hinged) {
  if (!(mass_kg >= 0.0)) throw InvalidRange("mass must be non-negative");
  ValidationReport r;
  r.diameter_mm = grasp_width(est, plan.approach) * 1e3;
  r.capacity_kg = capacity.max_payload(r.diameter_mm, plan.approach, hinged);
  r.payload_margin_kg = r.capacity_kg - mass_kg;
  r.payload_ok = mass_kg <= r.capacity_kg;
  if (plan.approach == Approach::Horizontal) {
    if (const auto* curve = capacity.curve(hinged)) r.predicted_deflection_mm = curve->deflection_at(mass_kg);
  }
  r.aperture_ok = r.diameter_mm <= plan.open_aperture_mm;
  r.passed = r.payload_ok && r.aperture_ok;
  return r;
}

std::string_view to_string(GraspKind k) { return k == GraspKind::Envelope ? "envelope" : "pinch"; }

nlohmann::json to_json(const GraspPlan& plan) {
  nlohmann::json traj = nlohmann::json::array();
  for (double t : plan.motor_trajectory.samples) traj.push_back(t);
  nlohmann::json comp = nlohmann::json::array();
  for (const auto& c : plan.arm_compensation) comp.push_back({{"theta", c.theta}, {"displacement_mm", c.displacement_mm}});
  nlohmann::json j{{"kind", std::string(to_string(plan.kind))},
                   {"approach", std::string(to_string(plan.approach))},
                   {"target_theta", plan.target_theta},
                   {"grasp_width_mm", plan.grasp_width_mm},
                   {"open_aperture_mm", plan.open_aperture_mm},
                   {"grasp_center_m", {plan.grasp_center_m.x(), plan.grasp_center_m.y(), plan.grasp_center_m.z()}},
                   {"motor_trajectory", {{"step", plan.motor_trajectory.step}, {"samples", traj}}},
                   {"arm_compensation", comp},
                   {"residual_uncompensated_mm", plan.residual_uncompensated_mm},
                   {"warnings", plan.warnings}};
  if (plan.fingertip_height_mm) j["fingertip_height_mm"] = *plan.fingertip_height_mm;
  return j;
}

nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json j{{"diameter_mm", r.diameter_mm},
                   {"capacity_kg", r.capacity_kg},
                   {"payload_margin_kg", r.payload_margin_kg},
                   {"payload_ok", r.payload_ok},
                   {"aperture_ok", r.aperture_ok},
                   {"passed", r.passed}};
  j["predicted_deflection_mm"] = r.predicted_deflection_mm ? nlohmann::json(*r.predicted_deflection_mm) : nlohmann::json();
  return j;
}

std::string compensation_csv(const GraspPlan& plan) {
  std::string out(kCompensationCsvHeader);
  out += '\n';
  for (const auto& c : plan.arm_compensation) {
    out += format_number(c.theta);
    out += ',';
    out += format_number(c.displacement_mm);
    out += '\n';
  }
  return out;
}

}  // namespace gripkit
