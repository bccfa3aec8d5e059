// gripkit command-line front end.
//
// Exit codes: 0 ok, 2 configuration/parse error, 3 kinematic domain error,
// 4 empty cloud after cropping, 5 infeasible grasp, 6 no surface contact.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gripkit/approach.hpp"
#include "gripkit/capacity.hpp"
#include "gripkit/format.hpp"
#include "gripkit/geometry_io.hpp"
#include "gripkit/kinematics.hpp"
#include "gripkit/planner.hpp"
#include "gripkit/run_config.hpp"
#include "gripkit/scene.hpp"
#include "gripkit/simulation.hpp"

namespace fs = std::filesystem;
using namespace gripkit;

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kDomain = 3,
  kEmpty = 4,
  kInfeasible = 5,
  kNoContact = 6,
};

struct ExitRequest {
  int code;
  std::string message;
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return out.str();
}

/// Collects artifacts of one invocation and writes them either into the run
/// directory (with a provenance manifest) or to stdout.
class RunOutput {
 public:
  RunOutput(std::string command, std::optional<fs::path> dir) : command_(std::move(command)), dir_(std::move(dir)) {}

  void input(const fs::path& path) { inputs_.push_back(path); }

  void artifact(const std::string& name, const std::string& contents, bool primary = true) {
    if (dir_) {
      write_file(*dir_ / name, contents);
      outputs_.push_back(name);
    } else if (primary) {
      std::cout << contents;
    } else {
      std::cerr << contents;
    }
  }

  void finish() {
    if (!dir_) return;
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& p : inputs_) inputs.push_back({{"path", p.generic_string()}, {"sha256", sha256_hex(read_file(p))}});
    nlohmann::json manifest{{"command", command_}, {"inputs", inputs}, {"outputs", outputs_}};
    write_file(*dir_ / "run_manifest.json", manifest.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::optional<fs::path> dir_;
  std::vector<fs::path> inputs_;
  std::vector<std::string> outputs_;
};

struct Globals {
  std::string config;
  std::string out_dir;
  bool strict = false;
};

struct Context {
  RunConfig config;
  std::optional<fs::path> out_dir;
  std::vector<fs::path> inputs;
};

Context make_context(const Globals& g) {
  Context ctx;
  std::string config_path = g.config;
  if (config_path.empty()) {
    if (const char* env = std::getenv("GRIPKIT_CONFIG")) config_path = env;
  }
  if (!config_path.empty()) {
    ctx.config = load_run_config(config_path);
    ctx.inputs = ctx.config.inputs;
  }
  if (!g.out_dir.empty()) {
    ctx.out_dir = fs::path(g.out_dir);
  } else if (ctx.config.output_directory) {
    ctx.out_dir = ctx.config.output_directory;
  }
  return ctx;
}

RunOutput open_output(const std::string& command, const Context& ctx) {
  RunOutput out(command, ctx.out_dir);
  for (const auto& p : ctx.inputs) out.input(p);
  return out;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

struct FkArgs {
  std::optional<double> theta;
  std::optional<double> from;
  std::optional<double> to;
  double step = kDefaultStep;
  std::string geometry;
};

int run_fk(const Globals& g, const FkArgs& a) {
  Context ctx = make_context(g);
  if (!a.geometry.empty()) {
    ctx.config.geometry = load_geometry(a.geometry);
    ctx.inputs.push_back(a.geometry);
  }
  const Geometry& geom = ctx.config.geometry;

  std::vector<double> thetas;
  if (a.theta) {
    if (a.from || a.to) throw ExitRequest{kConfig, "use either --theta or --from/--to"};
    thetas.push_back(*a.theta);
  } else if (a.from && a.to) {
    thetas = sample_trajectory(*a.from, *a.to, a.step).samples;
  } else {
    throw ExitRequest{kConfig, "fk needs --theta or both --from and --to"};
  }

  for (double theta : thetas) {
    if (in_operating_window(geom, theta)) continue;
    const std::string msg = "theta " + format_number(theta) + " rad is outside the operating window [" +
                            format_number(geom.theta_closed) + ", " + format_number(geom.theta_open) + "]";
    if (g.strict) throw ExitRequest{kDomain, msg};
    std::cerr << "warning: " << msg << "\n";
    break;
  }

  std::vector<FingerState<double>> states;
  states.reserve(thetas.size());
  for (double theta : thetas) states.push_back(forward_kinematics(geom, theta));

  RunOutput out = open_output("fk", ctx);
  out.artifact("fk.csv", fk_csv(states));
  out.finish();
  return kOk;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string manifest;
  std::optional<double> trim;
};

nlohmann::json decision_json(const ApproachDecision& d) {
  return {{"approach", std::string(to_string(d.verdict))},
          {"reason", std::string(to_string(d.reason))},
          {"grasp_width_m", d.grasp_width_m}};
}

int run_estimate(const Globals& g, const EstimateArgs& a) {
  Context ctx = make_context(g);
  SceneManifest manifest = load_manifest(a.manifest);
  if (a.trim) manifest.trim_percentile = *a.trim;

  const PipelineResult result = run_pipeline(manifest);
  for (std::size_t i = 0; i < result.view_points.size(); ++i) {
    std::cerr << "view " << i << ": " << result.view_points[i] << " points\n";
  }
  std::cerr << "merged: " << result.merged_points << " points\n"
            << "cropped: " << result.cropped_points << " points\n"
            << "estimate: " << result.estimate.point_count << " points retained\n";

  const ApproachDecision decision = decide_approach(result.estimate, ctx.config.geometry, ctx.config.workspace);
  nlohmann::json views = nlohmann::json::array();
  for (auto n : result.view_points) views.push_back(n);
  const nlohmann::json report{
      {"estimate", to_json(result.estimate)},
      {"decision", decision_json(decision)},
      {"stages", {{"views", views}, {"merged", result.merged_points}, {"cropped", result.cropped_points}}}};

  RunOutput out = open_output("estimate", ctx);
  out.input(a.manifest);
  for (const auto& v : manifest.views) out.input(v.cloud);
  out.artifact("estimate.json", dump(report));
  out.finish();
  return kOk;
}

// ---------------------------------------------------------------------------

struct PlanArgs {
  std::string estimate;
  double mass_kg = 0.0;
  bool unhinged = false;
  double squeeze_margin_mm = 5.0;
  double residual_fraction = 0.0;
  std::optional<double> surface_height_mm;
};

int run_plan(const Globals& g, const PlanArgs& a) {
  Context ctx = make_context(g);
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(read_file(a.estimate));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("estimate: " + std::string(e.what()));
  }
  const Estimate est = estimate_from_json(raw.contains("estimate") ? raw["estimate"] : raw);
  const Geometry& geom = ctx.config.geometry;

  const ApproachDecision decision = decide_approach(est, geom, ctx.config.workspace);
  if (decision.verdict == Verdict::Ungraspable) {
    throw ExitRequest{kInfeasible, "object is ungraspable: " + std::string(to_string(decision.reason))};
  }

  GraspPlan plan;
  if (decision.reason == DecisionReason::SmallHeight) {
    const double surface = a.surface_height_mm.value_or((est.centroid.z() - est.extents.z() / 2.0) * 1e3);
    plan = plan_pinch_grasp(geom, est, surface);
  } else {
    EnvelopeOptions options;
    options.squeeze_margin_mm = a.squeeze_margin_mm;
    options.residual_fraction = a.residual_fraction;
    options.approach = decision.verdict == Verdict::Horizontal ? Approach::Horizontal : Approach::Vertical;
    plan = plan_envelope_grasp(geom, est, options);
  }
  const ValidationReport report = validate_plan(plan, est, a.mass_kg, ctx.config.capacity, !a.unhinged);

  RunOutput out = open_output("plan", ctx);
  out.input(a.estimate);
  out.artifact("plan.json",
               dump({{"decision", decision_json(decision)}, {"plan", to_json(plan)}, {"validation", to_json(report)}}));
  out.artifact("plan_trajectory.csv", compensation_csv(plan), false);
  out.finish();
  return kOk;
}

// ---------------------------------------------------------------------------

struct SlideArgs {
  bool require_contact = false;
  std::optional<double> surface_y;
  std::optional<double> surface_at_theta;
};

int run_slide(const Globals& g, const SlideArgs& a) {
  Context ctx = make_context(g);
  std::optional<SlideConfig> cfg = ctx.config.slide;
  if (a.surface_y || a.surface_at_theta) {
    if (a.surface_y && a.surface_at_theta) throw ExitRequest{kConfig, "give one of --surface-y or --surface-at-theta"};
    if (!cfg) {
      cfg = SlideConfig{};
      cfg->theta_from = ctx.config.geometry.theta_open;
    }
    cfg->surface_y = a.surface_y ? *a.surface_y : forward_kinematics(ctx.config.geometry, *a.surface_at_theta).y_tip;
  }
  if (!cfg) throw ExitRequest{kConfig, "simulate-slide needs a 'slide' config block or a surface flag"};

  const SlideTrace trace = simulate_slide(ctx.config.geometry, *cfg);
  nlohmann::json summary{{"contact", trace.contact},
                         {"contact_theta", trace.contact_theta ? nlohmann::json(*trace.contact_theta) : nlohmann::json()},
                         {"closure_theta", trace.closure_theta},
                         {"peak_bend_mm", trace.peak_bend},
                         {"surface_y_mm", cfg->surface_y},
                         {"warnings", trace.warnings}};

  RunOutput out = open_output("simulate-slide", ctx);
  out.artifact("slide.csv", slide_trace_csv(trace));
  out.artifact("slide_summary.json", dump(summary), false);
  out.finish();
  if (!trace.contact && a.require_contact) throw ExitRequest{kNoContact, "no surface contact during the slide"};
  return kOk;
}

// ---------------------------------------------------------------------------

struct FreeArgs {
  int cycles = 1;
  double step = kDefaultStep;
};

int run_free(const Globals& g, const FreeArgs& a) {
  Context ctx = make_context(g);
  if (a.cycles < 1) throw ExitRequest{kConfig, "--cycles must be at least 1"};
  const auto commands = open_close_cycle(ctx.config.geometry, a.step, a.cycles);
  const auto trace = simulate_free(ctx.config.geometry, commands, ctx.config.perturbation);
  RunOutput out = open_output("simulate-free", ctx);
  out.artifact("free.csv", free_trace_csv(trace));
  out.finish();
  return kOk;
}

int exit_for(const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slider-crank gripper kinematics, grasp planning and simulation"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--config", globals.config, "run config JSON (default: $GRIPKIT_CONFIG)");
  app.add_option("--out-dir", globals.out_dir, "write artifacts and a provenance manifest here");
  app.add_flag("--strict", globals.strict, "treat angles outside the operating window as errors");

  FkArgs fk;
  auto* fk_cmd = app.add_subcommand("fk", "forward kinematics trace as CSV");
  fk_cmd->add_option("--theta", fk.theta, "single motor angle (rad)")->allow_extra_args(false);
  fk_cmd->add_option("--from", fk.from, "first motor angle (rad)")->allow_extra_args(false);
  fk_cmd->add_option("--to", fk.to, "last motor angle (rad)")->allow_extra_args(false);
  fk_cmd->add_option("--step", fk.step, "increment (rad)");
  fk_cmd->add_option("--geometry", fk.geometry, "geometry JSON overriding the config");

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "object size and approach from a scene manifest");
  est_cmd->add_option("--manifest", est.manifest, "scene manifest JSON")->required();
  est_cmd->add_option("--trim", est.trim, "percentile trimmed from each end of every axis");

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan", "grasp plan and capacity validation for an estimate");
  plan_cmd->add_option("--estimate", plan.estimate, "estimate JSON")->required();
  plan_cmd->add_option("--mass", plan.mass_kg, "object mass (kg)")->required();
  plan_cmd->add_flag("--unhinged", plan.unhinged, "validate against the gripper without hinge support");
  plan_cmd->add_option("--squeeze-margin", plan.squeeze_margin_mm, "envelope squeeze (mm)");
  plan_cmd->add_option("--residual-fraction", plan.residual_fraction, "uncompensated share of slider travel");
  plan_cmd->add_option("--surface-height", plan.surface_height_mm, "surface height for pinch grasps (mm)");

  SlideArgs slide;
  auto* slide_cmd = app.add_subcommand("simulate-slide", "sliding grasp on a flat surface");
  slide_cmd->add_flag("--require-contact", slide.require_contact, "exit 6 if the fingertip never touches");
  slide_cmd->add_option("--surface-y", slide.surface_y, "surface height in the gripper frame (mm)");
  slide_cmd->add_option("--surface-at-theta", slide.surface_at_theta, "place the surface at the model tip height");

  FreeArgs free_args;
  auto* free_cmd = app.add_subcommand("simulate-free", "open/close cycles with backlash and bias");
  free_cmd->add_option("--cycles", free_args.cycles, "number of close/open cycles");
  free_cmd->add_option("--step", free_args.step, "increment (rad)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*fk_cmd) return run_fk(globals, fk);
    if (*est_cmd) return run_estimate(globals, est);
    if (*plan_cmd) return run_plan(globals, plan);
    if (*slide_cmd) return run_slide(globals, slide);
    if (*free_cmd) return run_free(globals, free_args);
  } catch (const ExitRequest& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const EmptyCloud& e) {
    return exit_for(e, kEmpty);
  } catch (const PlanningError& e) {
    return exit_for(e, kInfeasible);
  } catch (const MissingCapacityData& e) {
    return exit_for(e, kInfeasible);
  } catch (const DomainError& e) {
    return exit_for(e, kDomain);
  } catch (const OutOfRange& e) {
    return exit_for(e, kDomain);
  } catch (const InvalidRange& e) {
    return exit_for(e, kConfig);
  } catch (const Error& e) {
    return exit_for(e, kConfig);
  } catch (const nlohmann::json::exception& e) {
    return exit_for(e, kConfig);
  } catch (const std::filesystem::filesystem_error& e) {
    return exit_for(e, kConfig);
  }
  return kConfig;
}
