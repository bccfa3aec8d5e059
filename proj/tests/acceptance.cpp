// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gripkit/capacity.hpp"
#include "gripkit/format.hpp"
#include "gripkit/geometry_io.hpp"
#include "gripkit/kinematics.hpp"
#include "gripkit/perception.hpp"
#include "gripkit/planner.hpp"
#include "gripkit/run_config.hpp"
#include "gripkit/simulation.hpp"
#include "support/process.hpp"
#include "support/synthetic.hpp"

using namespace gripkit;
namespace synth = gripkit::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  Outcome& out;
  void operator()(bool ok, const std::string& what) {
    if (!ok && out.pass) {
      out.pass = false;
      out.detail = what;
    }
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

const Geometry kGeom = default_geometry();

Outcome symmetry() {
  Outcome o;
  Check check{o};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.9, -0.8);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    const auto a = forward_kinematics(kGeom, t);
    const auto b = forward_kinematics(kGeom, -t);
    worst = std::max(worst, std::abs(a.x_left + a.x_right));
    check(a.y_b == b.y_b && a.delta == b.delta && a.b == b.b && a.alpha == b.alpha && a.x_left == b.x_left &&
              a.x_right == b.x_right && a.y_tip == b.y_tip,
          "FK(theta) != FK(-theta) at " + num(t));
  }
  check(worst <= 1e-12, "max |x_left + x_right| = " + num(worst));
  if (o.pass) o.detail = "max |x_left + x_right| = " + num(worst) + " mm over 1000 samples";
  return o;
}

Outcome roundtrip() {
  Outcome o;
  Check check{o};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = kGeom.theta_closed + (kGeom.theta_open - kGeom.theta_closed) * (i + 0.5) / 100.0;
    worst = std::max(worst, std::abs(inverse_kinematics(kGeom, aperture(kGeom, t)) - t));
  }
  check(worst <= 1e-6, "max |IK(FK(theta)) - theta| = " + num(worst));
  if (o.pass) o.detail = "max error " + num(worst) + " rad";
  return o;
}

Outcome jacobian() {
  Outcome o;
  Check check{o};
  const double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = kGeom.theta_closed + (kGeom.theta_open - kGeom.theta_closed) * (i + 0.5) / 50.0;
    const auto j = fingertip_jacobian(kGeom, t);
    const auto p = forward_kinematics(kGeom, t + h);
    const auto m = forward_kinematics(kGeom, t - h);
    const double fx = (p.x_left - m.x_left) / (2 * h);
    const double fy = (p.y_tip - m.y_tip) / (2 * h);
    worst = std::max({worst, std::abs(j.dx_left - fx) / std::abs(j.dx_left), std::abs(j.dy_tip - fy) / std::abs(j.dy_tip)});
  }
  check(worst <= 1e-6, "max relative error " + num(worst));
  if (o.pass) o.detail = "max relative error " + num(worst) + " at 50 points";
  return o;
}

Outcome trajectory() {
  Outcome o;
  const auto t = sample_trajectory(-0.8, -1.4, 0.015);
  o.pass = t.size() == 41 && t.front() == -0.8 && t.back() == -1.4;
  o.detail = std::to_string(t.size()) + " samples";
  return o;
}

double worst_relative(const Eigen::Vector3d& got, const Eigen::Vector3d& truth) {
  return ((got - truth).cwiseAbs().array() / truth.array()).maxCoeff();
}

Outcome perception() {
  Outcome o;
  Check check{o};
  const Eigen::Vector3d truth(0.08, 0.08, 0.12);
  const Eigen::Vector3d base(0.6, 0.1, 0.0);
  const Cloud clean = synth::cylinder(0.08, 0.12, 100, 50, base);
  check(clean.size() == 5000, "generator produced " + std::to_string(clean.size()) + " points");

  const double e_clean = worst_relative(estimate_object(clean, 0.0).extents, truth);
  check(e_clean <= 0.02, "noiseless extents off by " + num(e_clean));

  // 1% outliers spread over a 1 m box around the object
  const Cloud noisy = synth::with_outliers(clean, 50, base + Eigen::Vector3d(-0.5, -0.5, -0.44),
                                           base + Eigen::Vector3d(0.5, 0.5, 0.56), 2024);
  const double e_noisy = worst_relative(estimate_object(noisy, 0.01).extents, truth);
  check(e_noisy <= 0.05, "trimmed noisy extents off by " + num(e_noisy));

  const auto left_pose = synth::pose(0.4, -2.2, {0.3, -0.4, 0.5});
  const auto right_pose = synth::pose(-2.6, -2.0, {0.9, 0.6, 0.45});
  const std::vector<Cloud> views{
      transform_cloud(synth::to_camera(synth::half(clean, false, base.x()), left_pose), left_pose),
      transform_cloud(synth::to_camera(synth::half(clean, true, base.x()), right_pose), right_pose)};
  const auto single = estimate_object(clean, 0.01);
  const double e_merge = worst_relative(estimate_object(merge_clouds<double>(views), 0.01).extents, single.extents);
  check(e_merge <= 0.01, "two-view merge off by " + num(e_merge));
  if (o.pass) {
    o.detail = "clean " + num(e_clean) + ", outliers " + num(e_noisy) + ", merge " + num(e_merge) + " (relative)";
  }
  return o;
}

Outcome compensation() {
  Outcome o;
  Check check{o};
  Estimate large;
  large.extents = {0.08, 0.08, 0.12};
  large.centroid = {0.5, 0.0, 0.06};
  large.dominant_axis = Axis::Z;
  const GraspPlan env = plan_envelope_grasp(kGeom, large, 5.0);
  const double root = slider_displacement(kGeom, env.motor_trajectory.front());
  double env_worst = 0.0;
  for (const auto& c : env.arm_compensation) {
    env_worst = std::max(env_worst, std::abs(slider_displacement(kGeom, c.theta) + c.displacement_mm - root));
  }
  check(env_worst <= 1e-9, "envelope root drift " + num(env_worst));

  Estimate small;
  small.extents = {0.03, 0.02, 0.008};
  small.centroid = {0.5, 0.0, 0.004};
  const GraspPlan pinch = plan_pinch_grasp(kGeom, small, 0.0);
  const double tip = forward_kinematics(kGeom, pinch.motor_trajectory.front()).y_tip;
  double pinch_worst = 0.0;
  for (const auto& c : pinch.arm_compensation) {
    pinch_worst = std::max(pinch_worst, std::abs(forward_kinematics(kGeom, c.theta).y_tip + c.displacement_mm - tip));
  }
  check(pinch_worst <= 1e-9, "pinch fingertip drift " + num(pinch_worst));
  if (o.pass) o.detail = "envelope drift " + num(env_worst) + " mm, pinch drift " + num(pinch_worst) + " mm";
  return o;
}

Outcome capacity_ratios() {
  Outcome o;
  Check check{o};
  const CapacityModel m = load_capacity_model(GRIPKIT_DATA_DIR "/default_capacity.json");
  const double c_wh = m.peak_payload(Approach::Vertical, false) / m.peak_payload(Approach::Horizontal, false);
  const double c_h = m.peak_payload(Approach::Horizontal, true) / m.peak_payload(Approach::Vertical, true);
  const double gain_va = m.hinged_gain(Approach::Vertical);
  const double gain_ha = m.hinged_gain(Approach::Horizontal);
  const auto ha140 = m.entry(140, Approach::Horizontal, false);
  check(std::abs(c_wh - 1.43) <= 0.005, "unhinged VA/HA " + num(c_wh));
  check(std::abs(c_h - 1.0833) <= 0.005, "hinged HA/VA " + num(c_h));
  check(std::abs(gain_va - 1.32) <= 0.01, "hinged gain VA " + num(gain_va));
  check(std::abs(gain_ha - 3.52) <= 0.01, "hinged gain HA " + num(gain_ha));
  check(ha140 && *ha140 < 0.12, "unhinged HA at 140 mm not below 0.12 kg");
  if (o.pass) {
    o.detail = "VA/HA " + num(c_wh) + ", HA/VA " + num(c_h) + ", gains " + num(gain_va) + "/" + num(gain_ha) +
               ", HA@140 " + num(*ha140) + " kg";
  }
  return o;
}

Outcome deflection() {
  Outcome o;
  Check check{o};
  const CapacityModel m = load_capacity_model(GRIPKIT_DATA_DIR "/default_capacity.json");
  const auto* h = m.curve(true);
  const auto* u = m.curve(false);
  check(h && u, "missing deflection curve");
  if (!o.pass) return o;
  int compared = 0;
  for (const auto* c : {h, u}) {
    for (std::size_t i = 0; i < c->samples.size(); ++i) {
      if (i > 0) {
        check(c->samples[i].deflection_mm > c->samples[i - 1].deflection_mm, "deflection not strictly increasing");
        check(c->payload_kg(i) > c->payload_kg(i - 1), "payload not strictly increasing");
      }
      const double p = c->payload_kg(i);
      check(h->deflection_at(p) < u->deflection_at(p), "hinged deflection not below unhinged at " + num(p) + " kg");
      ++compared;
    }
  }
  if (o.pass) o.detail = std::to_string(compared) + " payload samples ordered";
  return o;
}

Outcome slide() {
  Outcome o;
  Check check{o};
  const RunConfig cfg = load_run_config(GRIPKIT_DATA_DIR "/configs/sliding_grasp.json");
  check(cfg.slide.has_value(), "sliding config has no slide block");
  if (!o.pass) return o;
  const SlideTrace t = simulate_slide(cfg.geometry, *cfg.slide);
  std::size_t sliding = 0;
  bool closed = false;
  double flex = -INFINITY;
  for (const auto& r : t.records) {
    if (r.phase == SlidePhase::Sliding) {
      ++sliding;
      check(r.y_sim == cfg.slide->surface_y, "y_sim != y_S while sliding at " + num(r.theta));
    }
    if (closed) {
      check(r.flex == flex, "flex changed after closure");
    } else {
      check(r.flex >= flex, "flex decreased before closure at " + num(r.theta));
    }
    flex = r.flex;
    closed = closed || r.phase == SlidePhase::Closed;
  }
  check(sliding > 0, "no sliding phase");
  check(t.closure_theta == -1.9, "closure at " + num(t.closure_theta));
  check(t.records.back().phase == SlidePhase::Closed, "trace does not end closed");
  if (o.pass) o.detail = std::to_string(sliding) + " sliding steps, closure at " + num(t.closure_theta) + " rad";
  return o;
}

Outcome free_sim() {
  Outcome o;
  Check check{o};
  const auto commands = open_close_cycle(kGeom, kDefaultStep, 1);
  const auto zero = simulate_free(kGeom, commands, {});
  for (const auto& s : zero) {
    const auto fk = forward_kinematics(kGeom, s.theta);
    check(s.x_left == fk.x_left && s.x_right == fk.x_right && s.y_tip == fk.y_tip,
          "zero-perturbation trace differs from FK at " + num(s.theta));
  }

  PerturbationModel biased;
  biased.x_bias_mm = -10.0;
  const auto no_backlash = simulate_free(kGeom, commands, biased);
  const std::size_t n = commands.size();
  for (std::size_t k = 0; k < n / 2; ++k) {
    const auto& close = no_backlash[k];
    const auto& open = no_backlash[n - 1 - k];
    if (close.theta == open.theta) {
      check(close.x_left == open.x_left && close.y_tip == open.y_tip, "open/close differ without backlash");
    }
  }

  PerturbationModel plus;
  plus.x_bias_mm = 10.0;
  const auto a = simulate_free(kGeom, commands, biased);
  const auto b = simulate_free(kGeom, commands, plus);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i].x_left - a[i].model.x_left;
    const double db = b[i].x_left - b[i].model.x_left;
    check(da < 0.0 && db > 0.0, "bias deviations not opposite at " + num(commands[i]));
    check(std::abs(a[i].x_left + a[i].x_right) <= 1e-12, "biased fingers no longer mirror at " + num(commands[i]));
    worst = std::max({worst, std::abs(da), std::abs(db)});
  }
  check(worst <= 10.0 + 1e-9, "bias deviation " + num(worst) + " mm exceeds 1 cm");
  if (o.pass) o.detail = "max bias deviation " + num(worst) + " mm";
  return o;
}

std::string snapshot(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += fs::relative(f, dir).string() + "\n" + read_file(f) + "\n";
  return all;
}

Outcome determinism() {
  Outcome o;
  Check check{o};
  const fs::path scratch = fs::temp_directory_path() / "gripkit_acceptance_determinism";
  fs::remove_all(scratch);
  const std::string data = GRIPKIT_DATA_DIR;
  const auto q = [](const std::string& s) { return synth::quote(s); };

  const std::vector<std::string> commands{
      "fk --from -0.8 --to -1.9",
      "estimate --manifest " + q(data + "/scenes/jar/manifest.json"),
      "plan --estimate " + q((scratch / "run0" / "estimate" / "estimate.json").string()) + " --mass 0.6",
      "--config " + q(data + "/configs/sliding_grasp.json") + " simulate-slide",
      "--config " + q(data + "/configs/hinged_free.json") + " simulate-free --cycles 3",
  };
  const std::vector<std::string> names{"fk", "estimate", "plan", "slide", "free"};
  for (int run = 0; run < 2; ++run) {
    for (std::size_t i = 0; i < commands.size(); ++i) {
      const fs::path out = scratch / ("run" + std::to_string(run)) / names[i];
      // plan always reads the first run's estimate so both runs see the same input path
      const auto r = synth::run_cli("--out-dir " + q(out.string()) + " " + commands[i], scratch / "io");
      check(r.exit_code == 0, names[i] + " exited " + std::to_string(r.exit_code) + ": " + r.err);
      write_file(out / "stderr.txt", r.err);
      write_file(out / "stdout.txt", r.out);
    }
  }
  for (const auto& name : names) {
    check(snapshot(scratch / "run0" / name) == snapshot(scratch / "run1" / name), name + " output differs");
  }
  fs::remove_all(scratch);
  if (o.pass) o.detail = std::to_string(names.size()) + " commands byte-identical across two runs";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_s;  // 0 = untimed
  };
  const std::vector<Criterion> criteria{
      {"kinematic symmetry", symmetry, 1.0},
      {"FK/IK roundtrip", roundtrip, 1.0},
      {"Jacobian vs finite differences", jacobian, 0.0},
      {"trajectory sampling", trajectory, 0.0},
      {"perception oracle", perception, 0.0},
      {"compensation identities", compensation, 0.0},
      {"capacity ratios", capacity_ratios, 0.0},
      {"deflection ordering", deflection, 0.0},
      {"slide simulation", slide, 1.0},
      {"free-sim fidelity", free_sim, 0.0},
      {"CLI determinism", determinism, 0.0},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].budget_s > 0 && elapsed >= criteria[i].budget_s) {
      o.pass = false;
      o.detail += "; took " + num(elapsed) + " s";
    }
    std::printf("[%s] %2zu %-32s %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(),
                elapsed);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
