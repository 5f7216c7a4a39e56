#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "ddfilter/filter.hpp"
#include "ddfilter/sequences.hpp"

namespace ddfilter {

/// Range of F trusted for slope fits: above the rounding floor, below the
/// onset of passband ripple.
inline constexpr double kCleanFloor = 1e-28;
inline constexpr double kCleanCeiling = 1e-2;

/// First upward crossing of F = 1 on the sample grid, refined by bisection
/// against the underlying evaluator. FID, whose filter only touches 1, uses
/// its first maximum u = pi. Throws NoCrossing.
double omega_f1(const FilterSamples& samples);

/// Fit window as fractions of u_f1. "Octave" is a factor two in u.
struct FitWindow {
  double lo_factor = 1.0 / 32.0;
  double hi_factor = 1.0 / 8.0;
};

struct RolloffFit {
  double db_per_octave = 0.0;
  double u_f1 = 0.0;
  /// Extent of the samples actually used after clipping to the clean range.
  double u_lo = 0.0;
  double u_hi = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of 10 log10 F against log2 u inside the window.
/// Throws WindowOutOfRange when the window leaves the grid or keeps fewer
/// than three clean samples, NumericFloor when those samples sit on the
/// rounding floor.
RolloffFit rolloff(const FilterSamples& samples, const FitWindow& window = {});

struct PassbandStats {
  double mean = 0.0;
  double max = 0.0;
  double min = 0.0;
  /// 10 log10(max / min), min clamped at the numeric floor.
  double ripple_db = 0.0;
  /// |mean - (4n + 2)| / (4n + 2).
  double deviation = 0.0;
  double span_lo = 0.0;
  double span_hi = 0.0;
};

/// Mean and extrema of F over [span_lo, span_hi] (default [100 pi, 200 pi])
/// computed from the sampled sequence's evaluator. The grid must reach one
/// decade above u_f1, else InsufficientSpan.
PassbandStats passband_stats(const FilterSamples& samples, std::size_t n,
                             double span_lo = 100.0 * std::numbers::pi,
                             double span_hi = 200.0 * std::numbers::pi);

struct BandpassProfile {
  /// False when F/omega^2 peaks at the lowest grid frequency (FID-like
  /// plateau); only plateau_value is meaningful then.
  bool has_peak = false;
  double peak_omega = 0.0;
  double peak_value = 0.0;
  double bandwidth = 0.0;
  double half_lo = 0.0;
  double half_hi = 0.0;
  /// Main lobe (between the minima bracketing the peak).
  double lobe_lo = 0.0;
  double lobe_hi = 0.0;
  /// 10 log10(peak / largest value outside the main lobe).
  double out_of_band_rejection_db = 0.0;
  double plateau_value = 0.0;
};

/// Dominant peak of the modified filter F(omega tau)/omega^2 on omega_grid.
BandpassProfile bandpass_profile(const PulseSequence& seq, double tau,
                                 const std::vector<double>& omega_grid);

enum class RatioFlag { Below, Equal, Above, Masked };

struct RatioSamples {
  std::vector<double> u;
  std::vector<double> ratio;
  std::vector<RatioFlag> flag;
};

/// Both filters below this: the ratio is undefined and masked.
inline constexpr double kRatioMask = 1e-30;

/// Pointwise F_a / F_b on a shared grid and variant.
RatioSamples filter_ratio(const PulseSequence& a, const PulseSequence& b,
                          const std::vector<double>& u_grid, const FilterVariant& variant = {});

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t first = 0;
  std::size_t last = 0;
};

/// Maximal contiguous runs of samples flagged `flag`.
std::vector<Band> contiguous_bands(const RatioSamples& ratio, RatioFlag flag);

struct FilterMetrics {
  double u_f1 = 0.0;
  RolloffFit rolloff;
  std::optional<PassbandStats> passband;
};

/// u_f1 and rolloff always; passband statistics when the grid is wide enough.
FilterMetrics compute_metrics(const FilterSamples& samples, const FitWindow& window = {});

}  // namespace ddfilter
