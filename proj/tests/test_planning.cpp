#include <cmath>

#include <gtest/gtest.h>

#include "gripkit/approach.hpp"
#include "gripkit/capacity.hpp"
#include "gripkit/format.hpp"
#include "gripkit/geometry_io.hpp"
#include "gripkit/planner.hpp"

using namespace gripkit;

namespace {

Estimate object(double ex, double ey, double ez, Eigen::Vector3d centroid = {0.5, 0.0, 0.0}) {
  Estimate e;
  e.extents = {ex, ey, ez};
  e.centroid = centroid.z() == 0.0 ? Eigen::Vector3d(centroid.x(), centroid.y(), ez / 2) : centroid;
  e.dominant_axis = dominant_axis(e.extents);
  e.point_count = 100;
  return e;
}

CapacityEntry entry(double d, Approach a, bool hinged, double kg) { return {d, a, hinged, kg}; }

DeflectionCurve curve(bool hinged, double ref, std::vector<double> mm) {
  DeflectionCurve c;
  c.hinged = hinged;
  c.reference_payload_kg = ref;
  for (std::size_t i = 0; i < mm.size(); ++i) c.samples.push_back({0.2 * double(i), mm[i]});
  return c;
}

}  // namespace

// --- approach decision ----------------------------------------------------

TEST(DecideApproach, FlatObjectGoesVertical) {
  const auto d = decide_approach(object(0.03, 0.03, 0.008), default_geometry());
  EXPECT_EQ(d.verdict, Verdict::Vertical);
  EXPECT_EQ(d.reason, DecisionReason::SmallHeight);
}

TEST(DecideApproach, BottleGoesHorizontal) {
  ASSERT_NEAR(aperture(default_geometry(), -0.8) * 1e-3, 0.11, 0.001);
  const auto d = decide_approach(object(0.06, 0.06, 0.20), default_geometry());
  EXPECT_EQ(d.verdict, Verdict::Horizontal);
  EXPECT_EQ(d.reason, DecisionReason::DominantVerticalExtent);
  EXPECT_EQ(d.grasp_width_m, 0.06);
}

TEST(DecideApproach, HugeObjectIsUngraspable) {
  const auto d = decide_approach(object(0.3, 0.3, 0.3), default_geometry());
  EXPECT_EQ(d.verdict, Verdict::Ungraspable);
  EXPECT_EQ(d.reason, DecisionReason::ExceedsAperture);
}

TEST(DecideApproach, WideSideFallsBackToTop) {
  const auto d = decide_approach(object(0.05, 0.2, 0.06), default_geometry());
  EXPECT_EQ(d.verdict, Verdict::Vertical);
  EXPECT_EQ(d.reason, DecisionReason::HorizontalInfeasible);
  EXPECT_EQ(d.grasp_width_m, 0.05);
}

TEST(DecideApproach, OutsideWorkspaceFallsBackToTop) {
  WorkspaceLimits limits;
  limits.min_corner = {0.0, -0.5, 0.0};
  limits.max_corner = {0.4, 0.5, 0.5};
  const auto d = decide_approach(object(0.06, 0.06, 0.20), default_geometry(), limits);
  EXPECT_EQ(d.verdict, Verdict::Vertical);
}

TEST(DecideApproach, ThresholdIsInclusive) {
  EXPECT_EQ(decide_approach(object(0.03, 0.03, 0.010), default_geometry()).reason, DecisionReason::SmallHeight);
  EXPECT_NE(decide_approach(object(0.03, 0.03, 0.012), default_geometry()).reason, DecisionReason::SmallHeight);
  ApproachPolicy policy;
  policy.small_height_threshold_mm = 15;
  EXPECT_EQ(decide_approach(object(0.03, 0.03, 0.012), default_geometry(), {}, policy).reason,
            DecisionReason::SmallHeight);
}

TEST(DecideApproach, Deterministic) {
  const Estimate e = object(0.07, 0.09, 0.05);
  const auto a = decide_approach(e, default_geometry());
  const auto b = decide_approach(e, default_geometry());
  EXPECT_EQ(a.verdict, b.verdict);
  EXPECT_EQ(a.reason, b.reason);
  EXPECT_EQ(a.reason, DecisionReason::HorizontalFit);
}

// --- capacity -------------------------------------------------------------

TEST(Capacity, ShippedRatios) {
  const CapacityModel m = default_capacity_model();
  EXPECT_NEAR(m.peak_payload(Approach::Vertical, false) / m.peak_payload(Approach::Horizontal, false), 1.43, 0.005);
  EXPECT_NEAR(m.peak_payload(Approach::Horizontal, true) / m.peak_payload(Approach::Vertical, true), 1.0833, 0.005);
  EXPECT_NEAR(m.hinged_gain(Approach::Vertical), 1.32, 0.01);
  EXPECT_NEAR(m.hinged_gain(Approach::Horizontal), 3.52, 0.01);
  EXPECT_LT(*m.entry(140, Approach::Horizontal, false), 0.12);
}

TEST(Capacity, OptimumAtEightyMillimeters) {
  const CapacityModel m = default_capacity_model();
  for (Approach a : {Approach::Horizontal, Approach::Vertical}) {
    EXPECT_EQ(*m.entry(80, a, true), m.peak_payload(a, true));
    EXPECT_EQ(*m.entry(80, a, false), m.peak_payload(a, false));
  }
}

TEST(Capacity, HingedNeverWeaker) {
  const CapacityModel m = default_capacity_model();
  for (const auto& e : m.entries()) {
    if (e.hinged) continue;
    EXPECT_GE(*m.entry(e.diameter_mm, e.approach, true), e.max_payload_kg);
  }
}

TEST(Capacity, DeflectionCurvesOrdered) {
  const CapacityModel m = default_capacity_model();
  const auto* h = m.curve(true);
  const auto* u = m.curve(false);
  ASSERT_TRUE(h && u);
  for (const auto* c : {h, u}) {
    for (std::size_t i = 1; i < c->samples.size(); ++i) {
      EXPECT_GT(c->samples[i].deflection_mm, c->samples[i - 1].deflection_mm);
      EXPECT_GT(c->payload_kg(i), c->payload_kg(i - 1));
    }
  }
  for (const auto* c : {h, u}) {
    for (std::size_t i = 0; i < c->samples.size(); ++i) {
      const double p = c->payload_kg(i);
      EXPECT_LT(h->deflection_at(p), u->deflection_at(p)) << p;
    }
  }
}

TEST(Capacity, Interpolation) {
  const CapacityModel m = default_capacity_model();
  EXPECT_DOUBLE_EQ(m.max_payload(80, Approach::Horizontal, true), 1.30);
  EXPECT_DOUBLE_EQ(m.max_payload(90, Approach::Horizontal, true), 1.15);
  EXPECT_THROW(m.max_payload(20, Approach::Horizontal, false), MissingCapacityData);
  EXPECT_THROW(m.max_payload(150, Approach::Vertical, true), MissingCapacityData);
  EXPECT_DOUBLE_EQ(m.max_payload(20, Approach::Horizontal, true), 0.55);
}

TEST(Capacity, ShippedFileMatchesDefault) {
  const CapacityModel file = load_capacity_model(GRIPKIT_DATA_DIR "/default_capacity.json");
  EXPECT_EQ(to_json(file), to_json(default_capacity_model()));
}

TEST(Capacity, EmptyTable) {
  EXPECT_THROW(CapacityModel({}, {}), InvariantViolation);
  EXPECT_THROW(parse_capacity_model(R"({"entries": [], "deflection_curves": []})"), InvariantViolation);
}

TEST(Capacity, HingedDeflectionAboveUnhinged) {
  std::vector<CapacityEntry> e{entry(80, Approach::Horizontal, true, 1.0), entry(80, Approach::Horizontal, false, 0.5)};
  EXPECT_NO_THROW(CapacityModel(e, {curve(true, 1.0, {1, 2, 3}), curve(false, 1.0, {2, 3, 4})}));
  EXPECT_THROW(CapacityModel(e, {curve(true, 1.0, {1, 2, 5}), curve(false, 1.0, {2, 3, 4})}), InvariantViolation);
}

TEST(Capacity, NonMonotoneDeflection) {
  std::vector<CapacityEntry> e{entry(80, Approach::Horizontal, true, 1.0)};
  EXPECT_THROW(CapacityModel(e, {curve(true, 1.0, {1, 3, 2})}), InvariantViolation);
}

TEST(Capacity, UnhingedStrongerThanHinged) {
  std::vector<CapacityEntry> e{entry(80, Approach::Vertical, true, 0.4), entry(80, Approach::Vertical, false, 0.5)};
  EXPECT_THROW(CapacityModel(e, {}), InvariantViolation);
}

TEST(Capacity, DuplicateEntry) {
  std::vector<CapacityEntry> e{entry(80, Approach::Vertical, true, 0.4), entry(80, Approach::Vertical, true, 0.5)};
  EXPECT_THROW(CapacityModel(e, {}), InvariantViolation);
}

TEST(Capacity, MalformedJson) {
  EXPECT_THROW(parse_capacity_model("{"), ParseError);
  EXPECT_THROW(parse_capacity_model(R"({"entries": [{"diameter_mm": 80}]})"), ParseError);
}

// --- envelope planning ----------------------------------------------------

TEST(EnvelopePlan, CompensationCancelsRootMotion) {
  const Geometry g = default_geometry();
  const GraspPlan plan = plan_envelope_grasp(g, object(0.08, 0.08, 0.12), 5.0);
  EXPECT_EQ(plan.kind, GraspKind::Envelope);
  EXPECT_NEAR(aperture(g, plan.target_theta), 75.0, 1e-6);
  ASSERT_GT(plan.arm_compensation.size(), 2u);
  EXPECT_EQ(plan.arm_compensation.front().displacement_mm, 0.0);
  const double root = slider_displacement(g, g.theta_open);
  for (const auto& c : plan.arm_compensation) {
    EXPECT_NEAR(slider_displacement(g, c.theta) + c.displacement_mm, root, 1e-9);
  }
  EXPECT_NEAR(std::abs(plan.arm_compensation.back().displacement_mm),
              std::abs(slider_displacement(g, g.theta_open) - slider_displacement(g, plan.target_theta)), 1e-12);
  EXPECT_TRUE(plan.warnings.empty());
  EXPECT_EQ(plan.residual_uncompensated_mm, 0.0);
}

TEST(EnvelopePlan, StartAtTargetIsStill) {
  const Geometry g = default_geometry();
  const Estimate e = object(0.08, 0.08, 0.12);
  EnvelopeOptions o;
  o.start_theta = plan_envelope_grasp(g, e, 5.0).target_theta;
  const GraspPlan plan = plan_envelope_grasp(g, e, o);
  for (const auto& c : plan.arm_compensation) EXPECT_EQ(c.displacement_mm, 0.0);
}

TEST(EnvelopePlan, ResidualFraction) {
  const Geometry g = default_geometry();
  EnvelopeOptions o;
  o.residual_fraction = 0.25;
  const GraspPlan plan = plan_envelope_grasp(g, object(0.08, 0.09, 0.12), o);
  const double travel = slider_displacement(g, plan.target_theta) - slider_displacement(g, g.theta_open);
  EXPECT_NEAR(plan.residual_uncompensated_mm, 0.25 * std::abs(travel), 1e-12);
  EXPECT_NEAR(plan.arm_compensation.back().displacement_mm, -0.75 * travel, 1e-12);
}

TEST(EnvelopePlan, ContinuousSteps) {
  const Geometry g = default_geometry();
  const GraspPlan plan = plan_envelope_grasp(g, object(0.08, 0.08, 0.12), 20.0);
  for (std::size_t i = 1; i < plan.arm_compensation.size(); ++i) {
    EXPECT_LT(std::abs(plan.arm_compensation[i].displacement_mm - plan.arm_compensation[i - 1].displacement_mm), 5.0);
  }
}

TEST(EnvelopePlan, SizeClasses) {
  const Geometry g = default_geometry();
  try {
    plan_envelope_grasp(g, object(0.14, 0.14, 0.12), 5.0);
    FAIL();
  } catch (const PlanningError& e) {
    EXPECT_EQ(e.kind, PlanningFailure::ObjectTooLarge);
  }
  try {
    plan_envelope_grasp(g, object(0.05, 0.05, 0.12), 5.0);
    FAIL();
  } catch (const PlanningError& e) {
    EXPECT_EQ(e.kind, PlanningFailure::ObjectTooSmall);
  }
}

TEST(EnvelopePlan, SqueezeBelowClosedApertureClamps) {
  const Geometry g = default_geometry();
  const GraspPlan plan = plan_envelope_grasp(g, object(0.08, 0.08, 0.12), 30.0);
  EXPECT_EQ(plan.target_theta, g.theta_closed);
  EXPECT_EQ(plan.warnings.size(), 1u);
}

// --- pinch planning -------------------------------------------------------

TEST(PinchPlan, FingertipHeightHeldConstant) {
  const Geometry g = default_geometry();
  const GraspPlan plan = plan_pinch_grasp(g, object(0.03, 0.02, 0.008), 0.0);
  EXPECT_EQ(plan.kind, GraspKind::Pinch);
  EXPECT_EQ(plan.approach, Approach::Vertical);
  EXPECT_EQ(plan.target_theta, g.theta_closed);
  EXPECT_EQ(plan.arm_compensation.size(), 41u);
  const double start = forward_kinematics(g, g.theta_open).y_tip;
  for (const auto& c : plan.arm_compensation) {
    EXPECT_NEAR(forward_kinematics(g, c.theta).y_tip + c.displacement_mm, start, 1e-9);
  }
  EXPECT_NEAR(plan.arm_compensation.back().displacement_mm,
              forward_kinematics(g, g.theta_open).y_tip - forward_kinematics(g, g.theta_closed).y_tip, 1e-12);
  EXPECT_NEAR(*plan.fingertip_height_mm, 4.0, 1e-12);
}

TEST(PinchPlan, TallObjectNotPinchable) {
  try {
    plan_pinch_grasp(default_geometry(), object(0.03, 0.03, 0.012), 0.0);
    FAIL();
  } catch (const PlanningError& e) {
    EXPECT_EQ(e.kind, PlanningFailure::NotPinchable);
  }
}

TEST(PinchPlan, SurfaceConflict) {
  try {
    plan_pinch_grasp(default_geometry(), object(0.03, 0.03, 0.008), 5.0);
    FAIL();
  } catch (const PlanningError& e) {
    EXPECT_EQ(e.kind, PlanningFailure::SurfaceConflict);
  }
}

// --- validation -----------------------------------------------------------

TEST(ValidatePlan, ZeroMassPasses) {
  const Geometry g = default_geometry();
  const Estimate e = object(0.08, 0.08, 0.12);
  const auto r = validate_plan(plan_envelope_grasp(g, e, 5.0), e, 0.0, default_capacity_model());
  EXPECT_TRUE(r.payload_ok);
  EXPECT_TRUE(r.passed);
  ASSERT_TRUE(r.predicted_deflection_mm);
  EXPECT_EQ(*r.predicted_deflection_mm, 1.0);
}

TEST(ValidatePlan, OverweightReportsMargin) {
  const Geometry g = default_geometry();
  const Estimate e = object(0.08, 0.08, 0.12);
  const auto plan = plan_envelope_grasp(g, e, 5.0);
  const auto r = validate_plan(plan, e, 0.7, default_capacity_model(), false);
  EXPECT_FALSE(r.payload_ok);
  EXPECT_FALSE(r.passed);
  EXPECT_NEAR(r.payload_margin_kg, 0.5 - 0.7, 1e-12);
  EXPECT_TRUE(validate_plan(plan, e, 0.7, default_capacity_model(), true).passed);
}

TEST(ValidatePlan, VerticalHasNoDeflection) {
  const Geometry g = default_geometry();
  const Estimate e = object(0.03, 0.02, 0.008);
  const auto r = validate_plan(plan_pinch_grasp(g, e, 0.0), e, 0.1, default_capacity_model());
  EXPECT_FALSE(r.predicted_deflection_mm);
  EXPECT_TRUE(r.passed);
}

TEST(ValidatePlan, MissingDataForTwistingFingers) {
  const Geometry g = default_geometry();
  const Estimate e = object(0.02, 0.02, 0.008);
  EXPECT_THROW(validate_plan(plan_pinch_grasp(g, e, 0.0), e, 0.1, default_capacity_model(), false),
               MissingCapacityData);
}

TEST(PlanExport, CsvAndJson) {
  const Geometry g = default_geometry();
  const GraspPlan plan = plan_envelope_grasp(g, object(0.08, 0.08, 0.12), 5.0);
  const std::string csv = compensation_csv(plan);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCompensationCsvHeader);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), plan.arm_compensation.size() + 1);
  const auto j = to_json(plan);
  EXPECT_EQ(j["kind"], "envelope");
  EXPECT_EQ(j["arm_compensation"].size(), plan.arm_compensation.size());
}
