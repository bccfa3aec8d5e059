#include "gripkit/scene.hpp"

#include "gripkit/approach.hpp"
#include "gripkit/cloud_io.hpp"
#include "gripkit/format.hpp"

namespace gripkit {

namespace {

Eigen::Vector3d vec3(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(std::string(what) + ": expected 3 numbers");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + ": expected 3 numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

nlohmann::json vec_json(const Eigen::Vector3d& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

Axis axis_from_string(const std::string& s) {
  if (s == "X") return Axis::X;
  if (s == "Y") return Axis::Y;
  if (s == "Z") return Axis::Z;
  throw ConfigError("estimate: unknown dominant axis '" + s + "'");
}

}  // namespace

ScenePose<double> pose_from_row_major(const nlohmann::json& values) {
  if (!values.is_array() || values.size() != 16) throw ConfigError("transform: expected 16 numbers");
  ScenePose<double> pose;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const auto& v = values[static_cast<std::size_t>(4 * r + c)];
      if (!v.is_number()) throw ConfigError("transform: expected 16 numbers");
      pose.transform(r, c) = v.get<double>();
    }
  }
  validate(pose);
  return pose;
}

SceneManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("views") || !j["views"].is_array()) {
    throw ConfigError("manifest: expected an object with a 'views' array");
  }
  SceneManifest m;
  for (const auto& v : j["views"]) {
    if (!v.contains("cloud") || !v["cloud"].is_string()) throw ConfigError("manifest: view without 'cloud' path");
    if (!v.contains("transform")) throw ConfigError("manifest: view without 'transform'");
    std::filesystem::path p = v["cloud"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    m.views.push_back({p, pose_from_row_major(v["transform"])});
  }
  if (j.contains("roi")) {
    const auto& r = j["roi"];
    if (!r.contains("min") || !r.contains("max")) throw ConfigError("manifest: roi needs 'min' and 'max'");
    RegionOfInterest<double> roi{vec3(r["min"], "roi.min"), vec3(r["max"], "roi.max")};
    validate(roi);
    m.roi = roi;
  }
  if (j.contains("trim_percentile")) {
    if (!j["trim_percentile"].is_number()) throw ConfigError("manifest: trim_percentile must be a number");
    m.trim_percentile = j["trim_percentile"].get<double>();
  }
  return m;
}

SceneManifest load_manifest(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("manifest: " + std::string(e.what()));
  }
  return manifest_from_json(j, path.parent_path());
}

PipelineResult run_pipeline(const SceneManifest& manifest) {
  PipelineResult result;
  std::vector<Cloud> global;
  global.reserve(manifest.views.size());
  for (const auto& view : manifest.views) {
    const Cloud raw = load_cloud(view.cloud);
    result.view_points.push_back(static_cast<std::size_t>(raw.size()));
    global.push_back(transform_cloud(raw, view.pose));
  }
  Cloud merged = merge_clouds<double>(global);
  result.merged_points = static_cast<std::size_t>(merged.size());
  if (manifest.roi) merged = crop_cloud(merged, *manifest.roi);
  result.cropped_points = static_cast<std::size_t>(merged.size());
  if (merged.empty()) throw EmptyCloud("no points left after cropping");
  result.estimate = estimate_object(merged, manifest.trim_percentile);
  return result;
}

nlohmann::json to_json(const Estimate& est) {
  return {{"centroid", vec_json(est.centroid)},
          {"extents", vec_json(est.extents)},
          {"point_count", est.point_count},
          {"dominant_axis", std::string(to_string(est.dominant_axis))}};
}

Estimate estimate_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("centroid") || !j.contains("extents")) {
    throw ConfigError("estimate: expected 'centroid' and 'extents'");
  }
  Estimate est;
  est.centroid = vec3(j["centroid"], "estimate.centroid");
  est.extents = vec3(j["extents"], "estimate.extents");
  if ((est.extents.array() < 0.0).any()) throw ConfigError("estimate: extents must be non-negative");
  est.point_count = j.value("point_count", std::size_t{0});
  est.dominant_axis = dominant_axis(est.extents);
  if (j.contains("dominant_axis") && axis_from_string(j["dominant_axis"].get<std::string>()) != est.dominant_axis) {
    throw ConfigError("estimate: dominant_axis disagrees with extents");
  }
  return est;
}

}  // namespace gripkit
