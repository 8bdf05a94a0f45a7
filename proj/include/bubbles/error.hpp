#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bubbles {

enum class ErrorCode {
  OverlapError,
  OutsideError,
  BadRadius,
  BadN,
  AlphaOutside,
  DifferentComponent,
  LengthMismatch,
  OddN,
  ZeroDimension,
  BreakdownError,
  NonConvergence,
  PointOutside,
  PoleProximity,
  ScaleNotAllowed,
  BadIndex,
  EmptyGrid,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-readable code so the
// CLI can map it onto exit codes and the JSON error record.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace bubbles
