#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gripkit/perception.hpp"

namespace gripkit {

/// Reads either plain XYZ text ("x y z" per line, '#' comments) or the ASCII
/// PCD v0.7 subset with FIELDS x y z, TYPE F, SIZE 4 or 8 and DATA ascii.
/// Throws ParseError carrying the line and column of the first bad record.
Cloud parse_cloud(std::string_view text, std::string frame_id = "camera");
Cloud load_cloud(const std::filesystem::path& path, std::string frame_id = "camera");

/// One "x y z" line per point in shortest round-trip notation.
std::string write_xyz(const Cloud& cloud);
std::string write_pcd(const Cloud& cloud);

}  // namespace gripkit
