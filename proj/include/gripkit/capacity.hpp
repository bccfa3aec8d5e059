#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gripkit/approach.hpp"

namespace gripkit {

struct CapacityEntry {
  double diameter_mm;
  Approach approach;
  bool hinged;
  double max_payload_kg;
};

struct DeflectionSample {
  double payload_fraction;  ///< of the curve's reference payload
  double deflection_mm;
};

/// Finger deflection under load, horizontal approach only.
struct DeflectionCurve {
  bool hinged = true;
  double reference_payload_kg = 0.0;
  std::vector<DeflectionSample> samples;

  /// Piecewise-linear in absolute payload; linear extrapolation past the ends.
  double deflection_at(double payload_kg) const;
  double payload_kg(std::size_t i) const { return samples[i].payload_fraction * reference_payload_kg; }
};

/// Payload capacity per (diameter, approach, hinge configuration) plus
/// deflection curves. Immutable; every constructor path enforces:
///   hinged >= unhinged payload at each shared (diameter, approach),
///   deflection strictly increasing with payload,
///   hinged deflection strictly below unhinged at every shared payload.
class CapacityModel {
 public:
  CapacityModel(std::vector<CapacityEntry> entries, std::vector<DeflectionCurve> curves,
                double reference_diameter_mm = 80.0);

  std::span<const CapacityEntry> entries() const { return entries_; }
  std::span<const DeflectionCurve> curves() const { return curves_; }
  double reference_diameter_mm() const { return reference_diameter_mm_; }

  std::optional<double> entry(double diameter_mm, Approach approach, bool hinged) const;

  /// Linear interpolation between the nearest measured diameters. Throws
  /// MissingCapacityData outside the measured span of that configuration.
  double max_payload(double diameter_mm, Approach approach, bool hinged) const;

  /// Largest measured payload over all diameters.
  double peak_payload(Approach approach, bool hinged) const;

  /// Mean hinged / mean unhinged payload over diameters measured in both.
  double hinged_gain(Approach approach) const;

  const DeflectionCurve* curve(bool hinged) const;

 private:
  std::vector<CapacityEntry> entries_;
  std::vector<DeflectionCurve> curves_;
  double reference_diameter_mm_;
};

CapacityModel capacity_from_json(const nlohmann::json& j);
CapacityModel parse_capacity_model(std::string_view text);
CapacityModel load_capacity_model(const std::filesystem::path& path);
nlohmann::json to_json(const CapacityModel& model);

/// Illustrative table shipped as data/default_capacity.json.
CapacityModel default_capacity_model();

}  // namespace gripkit
