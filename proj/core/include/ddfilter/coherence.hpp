#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ddfilter/quadrature.hpp"
#include "ddfilter/sequences.hpp"
#include "ddfilter/spectra.hpp"

namespace ddfilter {

struct ChiResult {
  double chi = 0.0;
  /// Quadrature error estimate plus the bound on the truncated tail.
  double error = 0.0;
  double tail_bound = 0.0;
  /// Upper integration limit in u = omega * tau.
  double u_upper = 0.0;
  std::size_t panels = 0;
};

/// Decay exponent chi = (2/pi) int_0^inf S(w) F(w tau) / w^2 dw.
///
/// Integrates in u = w tau over panels of width 2 pi / resolution with the
/// spectrum's breakpoints on panel edges. Soft-cutoff spectra are truncated
/// at their effective support, tightened until the worst-case tail
/// (max F times the remaining S/w^2 mass) is below half the tolerance.
/// Finite-width sequences use the finite-pulse filter with tau as the total
/// duration. Throws ToleranceNotMet (with the achieved value attached) when
/// the error estimate exceeds max(rel_tol * chi, abs_tol).
ChiResult chi(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
              const QuadratureConfig& cfg = {});

/// W = exp(-chi).
double coherence_w(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
                   const QuadratureConfig& cfg = {});

/// Supplies the sequence applied at each total time.
using SequenceSource = std::function<PulseSequence(double tau)>;

SequenceSource fixed_sequence(PulseSequence seq);
SequenceSource canonical_source(Family family, int n);

struct CoherenceCurve {
  std::vector<double> tau;
  std::vector<double> chi;
  std::vector<double> w;
  std::vector<double> error;
  std::vector<std::size_t> panels;
  std::vector<PulseSequence> sequences;

  std::size_t size() const noexcept { return tau.size(); }
};

/// Evaluates every tau concurrently; results are ordered by the grid. Point
/// failures are collected and rethrown together with their indices.
CoherenceCurve coherence_curve(const SequenceSource& source, const NoiseSpectrum& spec,
                               const std::vector<double>& tau_grid,
                               const QuadratureConfig& cfg = {});

}  // namespace ddfilter
