#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ddfilter/quadrature.hpp"
#include "ddfilter/sequences.hpp"
#include "ddfilter/spectra.hpp"

namespace ddfilter {

/// How a cell containing a sign flip or pulse edge is represented.
enum class Sampling {
  /// Exact cell average of y(t); the default.
  CellAverage,
  /// y at the cell midpoint, so every value is -1, 0 or +1 and each flip
  /// moves to the nearest cell boundary (timing quantized at dt / tau).
  Midpoint,
};

/// Toggling-frame sign y(t) over the cells of a uniform grid on [0, tau]
/// (midpoints t_k = (k + 1/2) dt): +1 at the start, flipping at every pulse
/// center, 0 inside finite-width pulses.
struct SamplingVector {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> y;
};

/// Throws UnderResolved when dt exceeds min_gap * tau / 8 or a quarter of
/// the pulse width.
SamplingVector sampling_vector(const PulseSequence& seq, double tau, std::size_t steps,
                               Sampling mode = Sampling::CellAverage);

/// C(lag) = (1/pi) int_0^inf S(w) cos(w lag) dw for lag >= 0. Throws
/// NonIntegrableSpectrum when S has no finite total power.
std::vector<double> autocovariance(const NoiseSpectrum& spec, std::span<const double> lags,
                                   const QuadratureConfig& cfg = {});

/// Convention constants. kappa multiplies the quadratic form; the filter
/// normalization g is 1/4 for FID, whose filter is sin^2(u/2) rather than
/// the general formula's 4 sin^2(u/2); the phase enters the Monte Carlo
/// average as cos(2 sqrt(g) phi).
inline constexpr double kGrammianKappa = 2.0;
double filter_normalization(const PulseSequence& seq) noexcept;

/// kappa g dt^2 sum_kl y_k y_l C(t_k - t_l), assembled by lag.
double grammian_chi(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
                    std::size_t steps, const QuadratureConfig& cfg = {},
                    Sampling mode = Sampling::CellAverage);

struct MonteCarloResult {
  double w = 1.0;
  double stderr_w = 0.0;
  std::size_t realizations = 0;
  std::size_t steps = 0;
  std::size_t modes = 0;
  std::uint64_t seed = 0;
};

/// Mean of cos(kappa' phi) over M Gaussian noise realizations synthesized as
/// sums of harmonics with random phases; each realization draws from its own
/// substream of `seed`, so the result is independent of thread count.
MonteCarloResult monte_carlo_w(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
                               std::size_t realizations, std::size_t steps, std::uint64_t seed);

struct OracleReport {
  double chi_freq = 0.0;
  double chi_grammian = 0.0;
  double rel_diff = 0.0;
  std::size_t steps = 0;
  double w_mc = 1.0;
  double stderr_w = 0.0;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
};

OracleReport oracle_report(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
                           std::size_t steps, std::size_t realizations, std::uint64_t seed,
                           const QuadratureConfig& cfg = {});

}  // namespace ddfilter
