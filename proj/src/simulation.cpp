#include "gripkit/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gripkit/format.hpp"

namespace gripkit {

void validate(const PerturbationModel& p) {
  if (!(std::abs(p.x_bias_mm) <= kMaxXBiasMm)) throw ConfigError("perturbation: |x_bias| must not exceed 10 mm");
  if (!(p.backlash_width_rad >= 0.0)) throw ConfigError("perturbation: backlash width must be non-negative");
  if (!(p.noise_sd_mm >= 0.0)) throw ConfigError("perturbation: noise sd must be non-negative");
}

std::vector<FreeSample> simulate_free(const Geometry& geom, std::span<const double> commands,
                                      const PerturbationModel& perturbation) {
  validate(perturbation);
  const double lowest = std::min(geom.theta_closed, kSlidingClosedTheta);
  for (double theta : commands) {
    if (!(theta >= lowest && theta <= geom.theta_open)) {
      throw DomainError("commanded angle " + format_number(theta) + " rad is outside the motor window");
    }
  }

  std::mt19937_64 rng(perturbation.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto noise = [&] {
    double z = gauss(rng);
    while (std::abs(z) > 4.0) z = gauss(rng);
    return perturbation.noise_sd_mm * z;
  };

  const double w = perturbation.backlash_width_rad;
  std::vector<FreeSample> trace;
  trace.reserve(commands.size());
  double effective = commands.empty() ? 0.0 : commands.front();
  double previous = effective;
  for (double theta : commands) {
    effective = std::clamp(effective, theta - w, theta + w);
    FreeSample s;
    s.theta = theta;
    s.theta_effective = effective;
    s.direction = theta < previous ? MotionDirection::Closing
                  : theta > previous ? MotionDirection::Opening
                                     : MotionDirection::Hold;
    previous = theta;
    s.model = forward_kinematics(geom, theta);
    const auto actual = effective == theta ? s.model : forward_kinematics(geom, effective);
    s.x_left = actual.x_left;
    s.x_right = actual.x_right;
    s.y_tip = actual.y_tip;
    if (perturbation.x_bias_mm != 0.0) {
      s.x_left += perturbation.x_bias_mm;
      s.x_right -= perturbation.x_bias_mm;
    }
    if (perturbation.noise_sd_mm > 0.0) {
      const double nx = noise();
      s.x_left += nx;
      s.x_right -= nx;
      s.y_tip += noise();
    }
    trace.push_back(s);
  }
  return trace;
}

std::vector<double> open_close_cycle(const Geometry& geom, double step, int cycles) {
  const auto closing = sample_trajectory(geom.theta_open, geom.theta_closed, step).samples;
  const auto opening = sample_trajectory(geom.theta_closed, geom.theta_open, step).samples;
  std::vector<double> out;
  for (int c = 0; c < cycles; ++c) {
    out.insert(out.end(), closing.begin() + (c == 0 ? 0 : 1), closing.end());
    out.insert(out.end(), opening.begin() + 1, opening.end());
  }
  return out;
}

std::string free_trace_csv(std::span<const FreeSample> trace) {
  std::string out(kFreeCsvHeader);
  out += '\n';
  for (const auto& s : trace) {
    out += format_number(s.theta) + ',' + format_number(s.theta_effective) + ',' + std::string(to_string(s.direction)) +
           ',' + format_number(s.x_left) + ',' + format_number(s.x_right) + ',' + format_number(s.y_tip) + ',' +
           format_number(s.model.x_left) + ',' + format_number(s.model.y_tip) + '\n';
  }
  return out;
}

void validate(const SlideConfig& cfg) {
  if (!std::isfinite(cfg.surface_y)) throw ConfigError("slide: surface_y must be finite");
  if (!(cfg.theta_to < cfg.theta_from)) throw ConfigError("slide: theta_to must be below theta_from");
  if (!(cfg.step > 0.0)) throw ConfigError("slide: step must be positive");
  if (!(cfg.flex_gain >= 0.0)) throw ConfigError("slide: flex_gain must be non-negative");
  if (!(cfg.approach_distance_mm >= 0.0) || cfg.approach_steps < 0) {
    throw ConfigError("slide: approach distance and steps must be non-negative");
  }
}

SlideTrace simulate_slide(const Geometry& geom, const SlideConfig& cfg) {
  validate(cfg);
  SlideTrace trace;
  double running_max = 0.0;
  bool closed = false;

  const auto push = [&](double theta, double y_free, bool motor_running, bool last) {
    SlideRecord r;
    r.theta = theta;
    r.y_free = y_free;
    r.bend = std::max(0.0, y_free - cfg.surface_y);
    r.y_sim = r.bend > 0.0 ? cfg.surface_y : y_free;
    if (r.bend > 0.0 && !trace.contact) {
      trace.contact = true;
      trace.contact_theta = theta;
    }
    trace.peak_bend = std::max(trace.peak_bend, r.bend);

    if (!closed) running_max = std::max(running_max, r.bend);
    r.flex = cfg.flex_offset + cfg.flex_gain * running_max;

    if (closed) {
      r.phase = SlidePhase::Closed;
    } else if (motor_running && (last || (trace.contact && r.bend == 0.0))) {
      r.phase = SlidePhase::Closed;
      closed = true;
      trace.closure_theta = theta;
    } else if (motor_running && r.bend > 0.0) {
      r.phase = SlidePhase::Sliding;
    } else {
      r.phase = SlidePhase::Approach;
    }
    trace.records.push_back(r);
  };

  const double y_grasp_pose = forward_kinematics(geom, cfg.theta_from).y_tip;
  for (int k = 0; k < cfg.approach_steps; ++k) {
    const double standoff = cfg.approach_distance_mm * double(cfg.approach_steps - k) / double(cfg.approach_steps);
    push(cfg.theta_from, y_grasp_pose - standoff, false, false);
  }
  const auto motor = sample_trajectory(cfg.theta_from, cfg.theta_to, cfg.step);
  for (std::size_t i = 0; i < motor.samples.size(); ++i) {
    const double theta = motor.samples[i];
    push(theta, forward_kinematics(geom, theta).y_tip, true, i + 1 == motor.samples.size());
  }

  if (!trace.contact) trace.warnings.push_back("NoContact: the fingertip never reaches the surface");
  return trace;
}

std::string slide_trace_csv(const SlideTrace& trace) {
  std::string out(kSlideCsvHeader);
  out += '\n';
  for (const auto& r : trace.records) {
    out += format_number(r.theta) + ',' + format_number(r.y_free) + ',' + format_number(r.y_sim) + ',' +
           format_number(r.bend) + ',' + format_number(r.flex) + ',' + std::string(to_string(r.phase)) + '\n';
  }
  return out;
}

FlexCommand flex_feedback_direction(std::span<const SlideRecord> suffix, const FlexFeedbackConfig& cfg) {
  if (suffix.size() < 2) throw InsufficientData("flex feedback needs at least two records");
  const bool at_offset = std::all_of(suffix.begin(), suffix.end(), [&](const SlideRecord& r) {
    return std::abs(r.flex - cfg.offset) <= cfg.offset_tolerance;
  });
  if (at_offset) return FlexCommand::Descend;
  const double rate = (suffix.back().flex - suffix.front().flex) / double(suffix.size() - 1);
  if (rate > cfg.max_contact_rate) return FlexCommand::Ascend;
  if (rate < -cfg.dead_band) return FlexCommand::Descend;
  return FlexCommand::Hold;
}

std::string_view to_string(MotionDirection d) {
  switch (d) {
    case MotionDirection::Hold: return "hold";
    case MotionDirection::Closing: return "closing";
    case MotionDirection::Opening: return "opening";
  }
  return "?";
}

std::string_view to_string(SlidePhase p) {
  switch (p) {
    case SlidePhase::Approach: return "approach";
    case SlidePhase::Sliding: return "sliding";
    case SlidePhase::Closed: return "closed";
  }
  return "?";
}

std::string_view to_string(FlexCommand c) {
  switch (c) {
    case FlexCommand::Descend: return "descend";
    case FlexCommand::Hold: return "hold";
    case FlexCommand::Ascend: return "ascend";
  }
  return "?";
}

}  // namespace gripkit
