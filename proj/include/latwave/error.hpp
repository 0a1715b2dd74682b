#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace latwave {

enum class ErrorKind {
  InvalidArgument,
  AmbiguousBoundary,
  UnsupportedShape,
  MissingLevel,
  MissingNeighbor,
  CorruptedState,
  CflViolated,
  TailTooLarge,
  SGridMisaligned,
  BlowupDetected,
  NanDetected,
  SingularSystem,
  NoCommonPoints,
  Config,
  Io,
};

/// Stable kebab-case name used in messages and CLI output.
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the explicit stepper when the solution magnitude leaves the
/// representable regime. Carries where it happened so demos can report it.
class BlowupError : public Error {
 public:
  BlowupError(int level, double time, double max_abs)
      : Error(ErrorKind::BlowupDetected,
              "max|v| = " + std::to_string(max_abs) + " at t = " + std::to_string(time)),
        level_(level), time_(time), max_abs_(max_abs) {}

  int level() const noexcept { return level_; }
  double time() const noexcept { return time_; }
  double max_abs() const noexcept { return max_abs_; }

 private:
  int level_;
  double time_;
  double max_abs_;
};

inline void require(bool condition, ErrorKind kind, const std::string& detail) {
  if (!condition) throw Error(kind, detail);
}

}  // namespace latwave
