#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gripkit/perception.hpp"

namespace gripkit {

struct SceneView {
  std::filesystem::path cloud;  ///< resolved against the manifest directory
  ScenePose<double> pose;
};

/// Multi-view capture description:
///   {"views": [{"cloud": "a.xyz", "transform": [16 numbers, row-major]}, ...],
///    "roi": {"min": [x, y, z], "max": [x, y, z]},   (optional)
///    "trim_percentile": 0.01}                         (optional)
struct SceneManifest {
  std::vector<SceneView> views;
  std::optional<RegionOfInterest<double>> roi;
  double trim_percentile = 0.01;
};

SceneManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
SceneManifest load_manifest(const std::filesystem::path& path);

struct PipelineResult {
  Estimate estimate;
  std::vector<std::size_t> view_points;
  std::size_t merged_points = 0;
  std::size_t cropped_points = 0;
};

/// load -> transform -> merge -> crop -> estimate. Throws EmptyCloud when the
/// region of interest removes every point.
PipelineResult run_pipeline(const SceneManifest& manifest);

ScenePose<double> pose_from_row_major(const nlohmann::json& values);

nlohmann::json to_json(const Estimate& est);
Estimate estimate_from_json(const nlohmann::json& j);

}  // namespace gripkit
