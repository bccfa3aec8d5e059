#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gripkit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A kinematic chain left its mathematical domain (e.g. b > 2l).
struct DomainError : Error {
  using Error::Error;
};

struct OutOfRange : Error {
  using Error::Error;
};

struct InvalidRange : Error {
  using Error::Error;
};

/// A configuration file or value violates the documented schema or invariants.
struct ConfigError : Error {
  using Error::Error;
};

/// Malformed text input. `line` and `column` are 1-based; 0 means unknown.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : what + " (line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ")"),
        line(line),
        column(column) {}

  std::size_t line;
  std::size_t column;
};

struct InvalidPose : Error {
  using Error::Error;
};

struct FrameMismatch : Error {
  using Error::Error;
};

struct EmptyCloud : Error {
  using Error::Error;
};

struct MissingCapacityData : Error {
  using Error::Error;
};

struct InvariantViolation : Error {
  using Error::Error;
};

struct InsufficientData : Error {
  using Error::Error;
};

enum class PlanningFailure { ObjectTooLarge, ObjectTooSmall, NotPinchable, SurfaceConflict };

struct PlanningError : Error {
  PlanningError(PlanningFailure kind, const std::string& what) : Error(what), kind(kind) {}
  PlanningFailure kind;
};

}  // namespace gripkit
