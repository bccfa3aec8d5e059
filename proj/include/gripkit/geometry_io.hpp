#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "gripkit/kinematics.hpp"

namespace gripkit {

/// Illustrative mechanism constants shipped as data/default_geometry.json.
/// They satisfy every domain constraint of the chain over [-1.9, -0.8] rad.
Geometry default_geometry();

/// Reads a geometry object with exactly the GripperGeometry field names.
/// Missing or unknown keys and invariant violations raise ConfigError.
Geometry geometry_from_json(const nlohmann::json& j);
Geometry parse_geometry(std::string_view text);
Geometry load_geometry(const std::filesystem::path& path);
nlohmann::json to_json(const Geometry& geom);

inline constexpr std::string_view kFkCsvHeader = "theta,y_b,delta,b,alpha,x_left,x_right,y_tip";

std::string fk_csv(std::span<const FingerState<double>> states);

}  // namespace gripkit
