#include "ddfilter/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "ddfilter/error.hpp"
#include "ddfilter/filter.hpp"
#include "ddfilter/parallel.hpp"

namespace ddfilter {

ChiResult chi(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
              const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::OutOfRange, "tau must be positive");
  }
  ChiResult out;
  if (spec.is_zero()) return out;

  const double r = seq.width_ratio();
  auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double f = r > 0.0 ? filter_value_finite(seq, u, r) : filter_value(seq, u);
    return spec(u / tau) * f / (u * u);
  };

  const double n = static_cast<double>(seq.size());
  const double f_max = seq.size() == 0 ? 1.0 : (2.0 * n + 2.0) * (2.0 * n + 2.0);
  const double scale = 2.0 / std::numbers::pi * tau;
  const double panel = 2.0 * std::numbers::pi / cfg.oscillation_resolution;

  std::vector<double> breaks = spec.breakpoints();
  for (double& b : breaks) b *= tau;

  double epsilon = std::min(0.1, cfg.rel_tol / 10.0);
  for (int attempt = 0;; ++attempt) {
    const FrequencyInterval support = spec.effective_support(epsilon);
    const double u_lo = support.lo * tau;
    const double u_hi = support.hi * tau;
    const QuadratureResult q = integrate_panels(integrand, u_lo, u_hi, panel, breaks, cfg);
    out.chi = scale * q.value;
    out.panels = q.panels;
    out.u_upper = u_hi;
    out.tail_bound = spec.has_hard_cutoff()
                         ? 0.0
                         : 2.0 / std::numbers::pi * f_max * spec.tail_mass(support.hi);
    out.error = scale * q.error + out.tail_bound;
    if (out.tail_bound <= 0.5 * std::max(cfg.rel_tol * out.chi, cfg.abs_tol) ||
        spec.has_hard_cutoff() || attempt >= 12 || epsilon < 1e-290) {
      break;
    }
    epsilon *= 1e-4;
  }

  if (!std::isfinite(out.chi)) {
    throw Error(ErrorKind::NonIntegrableSpectrum, "chi integral diverged");
  }
  if (out.error > std::max(cfg.rel_tol * out.chi, cfg.abs_tol)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "chi error estimate " << out.error << " exceeds tolerance (chi = " << out.chi << ")";
    throw Error(ErrorKind::ToleranceNotMet, msg.str(), out.chi);
  }
  return out;
}

double coherence_w(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
                   const QuadratureConfig& cfg) {
  return std::exp(-chi(seq, spec, tau, cfg).chi);
}

SequenceSource fixed_sequence(PulseSequence seq) {
  return [seq = std::move(seq)](double) { return seq; };
}

SequenceSource canonical_source(Family family, int n) {
  auto seq = make_canonical(family, n);
  return fixed_sequence(std::move(seq));
}

CoherenceCurve coherence_curve(const SequenceSource& source, const NoiseSpectrum& spec,
                               const std::vector<double>& tau_grid,
                               const QuadratureConfig& cfg) {
  if (tau_grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty tau grid");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > 0.0)) throw Error(ErrorKind::OutOfRange, "tau grid must be positive");
    if (i > 0 && !(tau_grid[i] > tau_grid[i - 1])) {
      throw Error(ErrorKind::NonMonotonic, "tau grid must be strictly increasing");
    }
  }

  const std::size_t count = tau_grid.size();
  CoherenceCurve curve;
  curve.tau = tau_grid;
  curve.chi.assign(count, 0.0);
  curve.w.assign(count, 1.0);
  curve.error.assign(count, 0.0);
  curve.panels.assign(count, 0);
  curve.sequences.assign(count, PulseSequence{});

  std::mutex mutex;
  struct Failure {
    std::size_t index;
    ErrorKind kind;
    std::string what;
  };
  std::vector<Failure> failures;

  parallel_for(count, [&](std::size_t i) {
    try {
      curve.sequences[i] = source(tau_grid[i]);
      const ChiResult r = chi(curve.sequences[i], spec, tau_grid[i], cfg);
      curve.chi[i] = r.chi;
      curve.w[i] = std::exp(-r.chi);
      curve.error[i] = r.error;
      curve.panels[i] = r.panels;
    } catch (const Error& e) {
      std::lock_guard lock(mutex);
      failures.push_back({i, e.kind(), e.what()});
    }
  });

  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end(),
              [](const Failure& a, const Failure& b) { return a.index < b.index; });
    std::ostringstream msg;
    msg << failures.size() << " tau point(s) failed:";
    for (const auto& f : failures) msg << " [" << f.index << "] " << f.what << ";";
    throw Error(failures.front().kind, msg.str());
  }
  return curve;
}

}  // namespace ddfilter
