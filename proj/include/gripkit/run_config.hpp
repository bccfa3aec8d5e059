#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "gripkit/approach.hpp"
#include "gripkit/capacity.hpp"
#include "gripkit/geometry_io.hpp"
#include "gripkit/kinematics.hpp"
#include "gripkit/simulation.hpp"

namespace gripkit {

/// Batch run settings. JSON layout (every block optional):
///   {"geometry": "geometry.json", "capacity": "capacity.json",
///    "perturbation": {"x_bias_mm", "backlash_width_rad", "noise_sd_mm", "seed"},
///    "slide": {"surface_y_mm" | "surface_at_theta", "theta_from", "theta_to", "step",
///              "flex_gain", "flex_offset", "approach_distance_mm", "approach_steps"},
///    "workspace": {"min": [x, y, z], "max": [x, y, z]},
///    "output_directory": "runs/demo"}
/// Relative paths resolve against the config file's directory. Missing
/// geometry or capacity fall back to the shipped defaults.
struct RunConfig {
  Geometry geometry = default_geometry();
  CapacityModel capacity = default_capacity_model();
  PerturbationModel perturbation;
  std::optional<SlideConfig> slide;
  WorkspaceLimits workspace;
  std::optional<std::filesystem::path> output_directory;
  std::vector<std::filesystem::path> inputs;  ///< files read while loading
};

RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace gripkit
