#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ddfilter/sequences.hpp"

namespace ddfilter {

/// Below this the complex phasor sum is dominated by rounding of the pulse
/// positions themselves; values under it carry no information.
inline constexpr double kFilterFloor = 1e-32;

/// Ideal (instantaneous-pulse) filter function F(u), u = omega * tau.
///
/// F = |1 + (-1)^(n+1) e^{iu} + 2 sum_j (-1)^j e^{i d_j u}|^2, with FID
/// (n = 0) normalized as sin^2(u/2). The sum is accumulated as phasors minus
/// one, which is exact algebra because the coefficients sum to zero, and
/// removes the O(1) cancellation that would otherwise floor F near 1e-31.
/// Requires seq.width_ratio() == 0.
double filter_value(const PulseSequence& seq, double u);

/// Finite-width filter in u' = omega * tau', tau' the total duration
/// including pulses; r = tau_pi / tau'. Throws WidthOverflow when r * n >= 1.
double filter_value_finite(const PulseSequence& seq, double u_prime, double r);

/// F(omega * tau) / omega^2. omega must be positive.
double modified_filter_value(const PulseSequence& seq, double omega, double tau);

struct FilterVariant {
  enum class Kind { Ideal, FiniteWidth, Quantized };
  Kind kind = Kind::Ideal;
  /// Width ratio r for FiniteWidth, timing precision p for Quantized.
  double parameter = 0.0;

  static FilterVariant ideal() { return {}; }
  static FilterVariant finite_width(double r) { return {Kind::FiniteWidth, r}; }
  static FilterVariant quantized(double p) { return {Kind::Quantized, p}; }

  std::string tag() const;
};

/// Evaluates the selected variant; Quantized applies quantize_timing to the
/// sequence first (prefer prepare() + evaluate_prepared() in loops).
double evaluate(const PulseSequence& seq, double u, const FilterVariant& variant);

/// The sequence the variant actually evaluates (quantized copy for
/// Quantized, unchanged otherwise).
PulseSequence prepare(const PulseSequence& seq, const FilterVariant& variant);
double evaluate_prepared(const PulseSequence& prepared, double u, const FilterVariant& variant);

struct FilterSamples {
  std::vector<double> u;
  std::vector<double> values;
  FilterVariant variant;
  std::size_t n = 0;
  /// Sequence the samples were computed from (after quantization when the
  /// variant is Quantized), so metrics can refine against the evaluator.
  PulseSequence sequence;
};

/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Log-spaced grid on [u_min, u_max] with round(decades * points_per_decade)
/// points, endpoints included. Evaluated concurrently, ordered by u.
FilterSamples sample_filter(const PulseSequence& seq, double u_min, double u_max,
                            int points_per_decade, const FilterVariant& variant = {});

/// Same, on a caller-supplied strictly increasing grid.
FilterSamples sample_filter_on(const PulseSequence& seq, std::vector<double> u_grid,
                               const FilterVariant& variant = {});

}  // namespace ddfilter
