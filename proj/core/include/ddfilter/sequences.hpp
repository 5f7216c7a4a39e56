#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddfilter {

enum class Family { FID, CPMG, PDD, UDD, Custom };

std::string_view to_string(Family family) noexcept;
/// Accepts lower- or upper-case names ("udd", "CPMG", ...).
Family parse_family(std::string_view name);

/// An n-pulse single-axis sequence on the unit interval.
///
/// Pulse centers are fractions of the total sequence time and are kept
/// strictly increasing inside (0, 1). The width ratio is the pulse duration
/// over the total duration (0 for instantaneous pulses). With a nonzero
/// width, every free segment (end segments minus half a pulse, interior gaps
/// minus a full pulse) must stay strictly positive. Instances are only
/// produced by the validating factories below and are immutable.
class PulseSequence {
 public:
  /// FID (no pulses).
  PulseSequence() : family_(Family::FID), label_("fid") {}

  std::size_t size() const noexcept { return deltas_.size(); }
  std::span<const double> deltas() const noexcept { return deltas_; }
  double width_ratio() const noexcept { return width_ratio_; }
  Family family() const noexcept { return family_; }
  const std::string& label() const noexcept { return label_; }

  bool operator==(const PulseSequence&) const = default;

 private:
  PulseSequence(std::vector<double> deltas, double width_ratio, Family family, std::string label);

  friend PulseSequence make_canonical(Family, int);
  friend PulseSequence make_custom(std::vector<double>, double, std::string);
  friend PulseSequence with_family(const PulseSequence&, Family, std::string);

  std::vector<double> deltas_;
  double width_ratio_ = 0.0;
  Family family_ = Family::Custom;
  std::string label_;
};

/// FID takes n = 0; every other canonical family needs n >= 1.
PulseSequence make_canonical(Family family, int n);

PulseSequence make_custom(std::vector<double> deltas, double width_ratio = 0.0,
                          std::string label = "custom");

/// Same pulses, relabelled. Used when an optimizer hands back a sequence that
/// coincides with a baseline.
PulseSequence with_family(const PulseSequence& seq, Family family, std::string label);

/// Returns a copy with the given pulse width ratio (validated).
PulseSequence with_width(const PulseSequence& seq, double width_ratio);

/// Rounds every center to the nearest multiple of `precision` (half away
/// from zero). Grids finer than the local floating-point spacing leave the
/// center untouched, which keeps the transform idempotent.
PulseSequence quantize_timing(const PulseSequence& seq, double precision);

/// The n + 1 center-to-center segments {d1, d2 - d1, ..., 1 - dn}.
std::vector<double> segments(const PulseSequence& seq);

/// Inverse of segments(): positive gaps are normalized to sum to one.
PulseSequence from_segments(std::span<const double> gaps, double width_ratio = 0.0,
                            std::string label = "custom");

/// Smallest segment, end segments included. FID returns 1.
double min_gap(const PulseSequence& seq);

/// Time reversal: d_j -> 1 - d_{n+1-j}.
PulseSequence reflect(const PulseSequence& seq);

/// Largest n with min_gap(make_canonical(family, n)) * tau >= tau_switch,
/// found by an upward scan. Returns 0 when a single pulse already violates.
int max_order(Family family, double tau, double tau_switch);

}  // namespace ddfilter
