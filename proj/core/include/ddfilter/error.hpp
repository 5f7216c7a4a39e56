#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ddfilter {

/// Failure categories surfaced by every module. The CLI prints the name.
enum class ErrorKind {
  InvalidArgument,
  NonMonotonic,
  OutOfRange,
  GapViolation,
  CollisionAfterRounding,
  WidthOverflow,
  NonIntegrableSpectrum,
  ToleranceNotMet,
  NoCrossing,
  WindowOutOfRange,
  NumericFloor,
  InsufficientSpan,
  NoPeak,
  Infeasible,
  UnderResolved,
  BadConfig,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  /// Carries a partial result, e.g. the achieved estimate on ToleranceNotMet.
  Error(ErrorKind kind, const std::string& message, double value);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  std::optional<double> value_;
};

}  // namespace ddfilter
