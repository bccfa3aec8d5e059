#include "gripkit/run_config.hpp"

#include "gripkit/format.hpp"
#include "gripkit/geometry_io.hpp"

namespace gripkit {

namespace {

std::filesystem::path resolve(const nlohmann::json& v, const std::filesystem::path& base, const char* what) {
  if (!v.is_string()) throw ConfigError(std::string("config: '") + what + "' must be a path");
  std::filesystem::path p = v.get<std::string>();
  if (p.is_relative()) p = base / p;
  if (!std::filesystem::exists(p)) throw ConfigError(std::string("config: ") + what + " file not found: " + p.string());
  return p;
}

double number(const nlohmann::json& block, const char* key, double fallback) {
  if (!block.contains(key)) return fallback;
  if (!block[key].is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return block[key].get<double>();
}

Eigen::Vector3d corner(const nlohmann::json& block, const char* key) {
  if (!block.contains(key) || !block[key].is_array() || block[key].size() != 3) {
    throw ConfigError(std::string("config: workspace.") + key + " needs 3 numbers");
  }
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) v(i) = block[key][static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig cfg;
  try {
    if (j.contains("geometry")) {
      const auto path = resolve(j["geometry"], base_dir, "geometry");
      cfg.geometry = load_geometry(path);
      cfg.inputs.push_back(path);
    }
    if (j.contains("capacity")) {
      const auto path = resolve(j["capacity"], base_dir, "capacity");
      try {
        cfg.capacity = load_capacity_model(path);
      } catch (const ParseError& e) {
        throw ConfigError(e.what());
      } catch (const InvariantViolation& e) {
        throw ConfigError(e.what());
      }
      cfg.inputs.push_back(path);
    }
    if (j.contains("perturbation")) {
      const auto& p = j["perturbation"];
      cfg.perturbation.x_bias_mm = number(p, "x_bias_mm", 0.0);
      cfg.perturbation.backlash_width_rad = number(p, "backlash_width_rad", 0.0);
      cfg.perturbation.noise_sd_mm = number(p, "noise_sd_mm", 0.0);
      cfg.perturbation.seed = p.value("seed", std::uint64_t{0});
      validate(cfg.perturbation);
    }
    if (j.contains("slide")) {
      const auto& s = j["slide"];
      SlideConfig slide;
      slide.theta_from = number(s, "theta_from", cfg.geometry.theta_open);
      slide.theta_to = number(s, "theta_to", kSlidingClosedTheta);
      slide.step = number(s, "step", kDefaultStep);
      slide.flex_gain = number(s, "flex_gain", 1.0);
      slide.flex_offset = number(s, "flex_offset", 0.0);
      slide.approach_distance_mm = number(s, "approach_distance_mm", 0.0);
      slide.approach_steps = s.value("approach_steps", 0);
      if (s.contains("surface_y_mm") == s.contains("surface_at_theta")) {
        throw ConfigError("config: slide needs exactly one of 'surface_y_mm' or 'surface_at_theta'");
      }
      slide.surface_y = s.contains("surface_y_mm")
                            ? number(s, "surface_y_mm", 0.0)
                            : forward_kinematics(cfg.geometry, number(s, "surface_at_theta", 0.0)).y_tip;
      validate(slide);
      cfg.slide = slide;
    }
    if (j.contains("workspace")) {
      cfg.workspace.min_corner = corner(j["workspace"], "min");
      cfg.workspace.max_corner = corner(j["workspace"], "max");
      if (!(cfg.workspace.min_corner.array() < cfg.workspace.max_corner.array()).all()) {
        throw ConfigError("config: workspace needs min < max on every axis");
      }
    }
    if (j.contains("output_directory")) {
      if (!j["output_directory"].is_string()) throw ConfigError("config: output_directory must be a path");
      std::filesystem::path out = j["output_directory"].get<std::string>();
      cfg.output_directory = out.is_relative() ? base_dir / out : out;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  RunConfig cfg = run_config_from_json(j, path.parent_path());
  cfg.inputs.insert(cfg.inputs.begin(), path);
  return cfg;
}

}  // namespace gripkit
