#include "gripkit/geometry_io.hpp"

#include <array>
#include <set>

#include "gripkit/format.hpp"

namespace gripkit {

namespace {

constexpr std::array<const char*, 10> kFields{"r1", "r2", "e", "c", "d", "l",
                                              "delta_x", "delta_y", "theta_open", "theta_closed"};

double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("geometry: missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("geometry: field '") + key + "' is not a number");
  return v.get<double>();
}

}  // namespace

Geometry default_geometry() {
  return {50.0, 66.0, 382.0, 16.0, 205.0, 200.0, 75.0, 40.0, -0.8, -1.4};
}

Geometry geometry_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("geometry: expected a JSON object");
  const std::set<std::string> known(kFields.begin(), kFields.end());
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError("geometry: unknown field '" + key + "'");
  }
  Geometry g{number_field(j, "r1"),      number_field(j, "r2"),        number_field(j, "e"),
             number_field(j, "c"),       number_field(j, "d"),         number_field(j, "l"),
             number_field(j, "delta_x"), number_field(j, "delta_y"),   number_field(j, "theta_open"),
             number_field(j, "theta_closed")};
  validate(g);
  return g;
}

Geometry parse_geometry(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
  return geometry_from_json(j);
}

Geometry load_geometry(const std::filesystem::path& path) { return parse_geometry(read_file(path)); }

nlohmann::json to_json(const Geometry& g) {
  return {{"r1", g.r1},           {"r2", g.r2},
          {"e", g.e},             {"c", g.c},
          {"d", g.d},             {"l", g.l},
          {"delta_x", g.delta_x}, {"delta_y", g.delta_y},
          {"theta_open", g.theta_open}, {"theta_closed", g.theta_closed}};
}

std::string fk_csv(std::span<const FingerState<double>> states) {
  std::string out(kFkCsvHeader);
  out += '\n';
  for (const auto& s : states) {
    for (double v : {s.theta, s.y_b, s.delta, s.b, s.alpha, s.x_left, s.x_right}) {
      out += format_number(v);
      out += ',';
    }
    out += format_number(s.y_tip);
    out += '\n';
  }
  return out;
}

}  // namespace gripkit
