#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace gripkit {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// Parses a whole token as a finite double; returns false on any leftover.
bool parse_number(std::string_view token, double& out);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace gripkit
