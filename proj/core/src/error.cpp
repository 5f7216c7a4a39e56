#include "ddfilter/error.hpp"

namespace ddfilter {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonMonotonic: return "NonMonotonic";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::GapViolation: return "GapViolation";
    case ErrorKind::CollisionAfterRounding: return "CollisionAfterRounding";
    case ErrorKind::WidthOverflow: return "WidthOverflow";
    case ErrorKind::NonIntegrableSpectrum: return "NonIntegrableSpectrum";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorKind::NumericFloor: return "NumericFloor";
    case ErrorKind::InsufficientSpan: return "InsufficientSpan";
    case ErrorKind::NoPeak: return "NoPeak";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::UnderResolved: return "UnderResolved";
    case ErrorKind::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

Error::Error(ErrorKind kind, const std::string& message, double value)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      value_(value) {}

}  // namespace ddfilter
