#include "bubbles/error.hpp"

namespace bubbles {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OverlapError: return "OverlapError";
    case ErrorCode::OutsideError: return "OutsideError";
    case ErrorCode::BadRadius: return "BadRadius";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::AlphaOutside: return "AlphaOutside";
    case ErrorCode::DifferentComponent: return "DifferentComponent";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::OddN: return "OddN";
    case ErrorCode::ZeroDimension: return "ZeroDimension";
    case ErrorCode::BreakdownError: return "BreakdownError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::PointOutside: return "PointOutside";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::ScaleNotAllowed: return "ScaleNotAllowed";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace bubbles
