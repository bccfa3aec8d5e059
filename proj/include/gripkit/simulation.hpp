#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gripkit/kinematics.hpp"

namespace gripkit {

// ---------------------------------------------------------------------------
// Free motion with mechanism imperfections

struct PerturbationModel {
  double x_bias_mm = 0.0;           ///< hinged fingers negative, unhinged positive
  double backlash_width_rad = 0.0;  ///< lag of the output after a reversal
  double noise_sd_mm = 0.0;         ///< Gaussian, truncated at 4 sd
  std::uint64_t seed = 0;
};

inline constexpr double kMaxXBiasMm = 10.0;

void validate(const PerturbationModel& p);

enum class MotionDirection { Hold, Closing, Opening };

struct FreeSample {
  double theta;            ///< commanded
  double theta_effective;  ///< after backlash
  MotionDirection direction;
  double x_left;
  double x_right;
  double y_tip;
  FingerState<double> model;  ///< ideal chain at the commanded angle
};

/// Replays commanded angles through a backlash play operator
///   theta_eff = clamp(theta_eff_prev, theta - w, theta + w)
/// and reports the fingertips at theta_eff with the X bias and optional noise.
/// With a zero model the samples equal forward_kinematics bit for bit.
/// Commands must lie in [-1.9, theta_open].
std::vector<FreeSample> simulate_free(const Geometry& geom, std::span<const double> commands,
                                      const PerturbationModel& perturbation = {});

/// theta_open -> theta_closed -> theta_open, `cycles` times.
std::vector<double> open_close_cycle(const Geometry& geom, double step = kDefaultStep, int cycles = 1);

inline constexpr std::string_view kFreeCsvHeader =
    "theta,theta_effective,direction,x_left,x_right,y_tip,x_left_model,y_tip_model";
std::string free_trace_csv(std::span<const FreeSample> trace);

// ---------------------------------------------------------------------------
// Sliding grasp on a flat surface

struct SlideConfig {
  double surface_y = 0.0;  ///< surface height along the finger axis, O1 frame (mm)
  double theta_from = -0.8;
  double theta_to = kSlidingClosedTheta;
  double step = kDefaultStep;
  double flex_gain = 1.0;    ///< reading units per mm of bend
  double flex_offset = 0.0;  ///< reading with a straight finger
  /// Arm descent onto the grasp pose before the motor starts; the tip moves
  /// from approach_distance_mm short of its grasp-pose height in equal steps.
  double approach_distance_mm = 0.0;
  int approach_steps = 0;
};

void validate(const SlideConfig& cfg);

enum class SlidePhase { Approach, Sliding, Closed };

struct SlideRecord {
  double theta;
  double y_free;  ///< unconstrained model tip
  double y_sim;   ///< min(y_free, surface_y)
  double bend;    ///< max(0, y_free - surface_y)
  double flex;
  SlidePhase phase;
};

struct SlideTrace {
  std::vector<SlideRecord> records;
  bool contact = false;
  std::optional<double> contact_theta;
  double closure_theta = 0.0;
  double peak_bend = 0.0;
  std::vector<std::string> warnings;
};

/// Kinematic clamp of the fingertip against the surface. A record is Sliding
/// while the finger is bent during motor travel; the grasp is Closed once the
/// finger straightens again or the motor reaches theta_to. The flex reading
/// follows the running maximum of the bend and is frozen after closure.
/// Coordinates are in the O1 frame of the final grasp pose.
SlideTrace simulate_slide(const Geometry& geom, const SlideConfig& cfg);

inline constexpr std::string_view kSlideCsvHeader = "theta,y_free,y_sim,bend,flex,phase";
std::string slide_trace_csv(const SlideTrace& trace);

// ---------------------------------------------------------------------------
// Flex-sensor feedback

enum class FlexCommand { Descend, Hold, Ascend };

struct FlexFeedbackConfig {
  double offset = 0.0;             ///< straight-finger reading
  double offset_tolerance = 1e-9;  ///< readings this close to offset mean no contact
  double dead_band = 1e-2;         ///< |rate| per record treated as steady
  double max_contact_rate = 2.0;   ///< faster bending means pressing too hard
};

/// Direction for the arm from the recent flex history:
///   all readings at offset           -> Descend (no contact yet)
///   rate > max_contact_rate          -> Ascend
///   rate < -dead_band                -> Descend (contact relaxing)
///   otherwise                        -> Hold
/// rate is the mean change per record over the suffix.
FlexCommand flex_feedback_direction(std::span<const SlideRecord> suffix, const FlexFeedbackConfig& cfg = {});

std::string_view to_string(MotionDirection d);
std::string_view to_string(SlidePhase p);
std::string_view to_string(FlexCommand c);

}  // namespace gripkit
