#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddfilter/quadrature.hpp"
#include "ddfilter/sequences.hpp"
#include "ddfilter/spectra.hpp"

namespace ddfilter {

struct OptimizationConfig {
  /// Jittered copies of the UDD start, on top of the UDD/CPMG/PDD starts.
  int restarts = 2;
  /// Simplex iterations per start.
  int max_iterations = 3000;
  /// Relative objective tolerance: simplex spread at convergence, and the
  /// least improvement the polishing step accepts.
  double tolerance = 1e-9;
  /// Initial simplex edge in the optimizer's coordinates.
  double initial_step = 0.1;
  std::uint64_t seed = 0;
  /// Lower bound on every segment, as a fraction of tau.
  std::optional<double> min_gap_fraction;
  QuadratureConfig quadrature;

  void validate() const;
};

struct Baseline {
  std::string label;
  double value = 0.0;
};

struct Diagnostics {
  int iterations = 0;
  int evaluations = 0;
  int restarts = 0;
  bool converged = false;
  /// All candidate objectives were equal (e.g. a zero spectrum).
  bool degenerate = false;
  /// Smallest segment minus the required minimum, as a fraction of tau.
  double constraint_slack = 0.0;
  std::string winning_start;
};

struct OptimizationResult {
  PulseSequence sequence;
  double objective = 0.0;
  std::vector<Baseline> baselines;
  Diagnostics diagnostics;

  /// Smallest baseline objective.
  double best_baseline() const;
};

/// Minimizes chi(seq, spec, tau) over pulse positions with n pulses.
OptimizationResult optimize_lodd(const NoiseSpectrum& spec, int n, double tau,
                                 const OptimizationConfig& cfg = {});

/// Integral of F(u) over [0, u_max].
double filter_area(const PulseSequence& seq, double u_max, const QuadratureConfig& cfg = {});

/// Minimizes filter_area(seq, u_max) over pulse positions with n pulses.
OptimizationResult optimize_ofdd(int n, double u_max, const OptimizationConfig& cfg = {});

/// chi as a pair sum over pulse times, chi = sum_kl c_k c_l K(tau |t_k - t_l|),
/// with K(t) = (2/pi) int S(w) (cos wt - 1) / w^2 dw. Closed form for the
/// supra-ohmic model, otherwise tabulated on [0, tau] and interpolated.
class LagKernel {
 public:
  LagKernel(const NoiseSpectrum& spec, double tau, std::size_t points = 16384);

  double operator()(double t) const;
  /// Ideal-pulse chi for positions `deltas` (fractions of tau).
  double chi(std::span<const double> deltas) const;
  bool closed_form() const noexcept { return closed_; }

 private:
  double tau_ = 0.0;
  bool closed_ = false;
  double alpha_ = 0.0;
  double a_ = 0.0;
  double step_ = 0.0;
  std::vector<double> table_;
};

struct BaddEntry {
  int n = 0;
  double chi = 0.0;
  double min_gap = 0.0;
  bool converged = false;
};

struct BaddResult {
  OptimizationResult best;
  /// One entry per pulse count tried, ordered by n.
  std::vector<BaddEntry> per_n;
  int udd_max_order = 0;
  int udd_best_n = 0;
  /// Best chi over constraint-feasible UDD orders; infinity when none is.
  double udd_best_chi = 0.0;
};

/// Sweeps n = 1 .. min(n_max, floor(tau / tau_switch) - 1) with every
/// segment at least tau_switch, searching on the lag-kernel objective and
/// ranking the finalists by chi(). Throws Infeasible when tau_switch > tau/2.
BaddResult optimize_badd(const NoiseSpectrum& spec, double tau, double tau_switch, int n_max,
                         const OptimizationConfig& cfg = {});

/// Euclidean projection of `gaps` onto {g_i >= lower, sum g = 1}.
std::vector<double> project_gaps(std::span<const double> gaps, double lower);

}  // namespace ddfilter
