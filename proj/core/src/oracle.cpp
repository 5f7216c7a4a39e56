#include "ddfilter/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <variant>

#include "ddfilter/coherence.hpp"
#include "ddfilter/error.hpp"
#include "ddfilter/parallel.hpp"

namespace ddfilter {
namespace {

// Upper frequency beyond which S carries a negligible share of total power.
double power_cutoff(const NoiseSpectrum& spec) {
  if (const auto* p = std::get_if<PowerLaw>(&spec.model())) {
    if (std::isfinite(p->omega_hi)) return p->omega_hi;
    if (p->exponent >= -1.0) {
      throw Error(ErrorKind::NonIntegrableSpectrum, "unbounded power law has no finite total power");
    }
    return p->omega_lo * std::pow(1e-13, 1.0 / (p->exponent + 1.0));
  }
  return spec.effective_support(1e-16).hi;
}

double power_floor(const NoiseSpectrum& spec) {
  if (const auto* p = std::get_if<PowerLaw>(&spec.model())) return p->omega_lo;
  if (const auto* t = std::get_if<Tabulated>(&spec.model())) return t->omega.front();
  return 0.0;
}

void check_tau(double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau must be positive");
}

}  // namespace

SamplingVector sampling_vector(const PulseSequence& seq, double tau, std::size_t steps,
                               Sampling mode) {
  check_tau(tau);
  if (steps < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 time steps");
  SamplingVector sv;
  sv.dt = tau / static_cast<double>(steps);
  if (sv.dt > min_gap(seq) * tau / 8.0) {
    throw Error(ErrorKind::UnderResolved, "time step is coarser than min_gap * tau / 8", sv.dt);
  }
  const double width = seq.width_ratio() * tau;
  if (width > 0.0 && sv.dt > width / 4.0) {
    throw Error(ErrorKind::UnderResolved, "time step is coarser than a quarter pulse width", sv.dt);
  }

  // y(t) as (start time, value) pieces
  std::vector<std::pair<double, double>> pieces{{0.0, 1.0}};
  double sign = 1.0;
  for (double d : seq.deltas()) {
    const double c = d * tau;
    sign = -sign;
    if (width > 0.0) {
      pieces.emplace_back(c - 0.5 * width, 0.0);
      pieces.emplace_back(c + 0.5 * width, sign);
    } else {
      pieces.emplace_back(c, sign);
    }
  }
  pieces.emplace_back(tau, 0.0);

  sv.t.resize(steps);
  sv.y.resize(steps);
  std::size_t piece = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double a = static_cast<double>(k) * sv.dt;
    const double b = static_cast<double>(k + 1) * sv.dt;
    const double mid = (static_cast<double>(k) + 0.5) * sv.dt;
    sv.t[k] = mid;
    while (piece + 1 < pieces.size() && pieces[piece + 1].first <= a) ++piece;
    if (mode == Sampling::Midpoint) {
      std::size_t p = piece;
      while (p + 1 < pieces.size() && pieces[p + 1].first <= mid) ++p;
      sv.y[k] = pieces[p].second;
      continue;
    }
    double acc = 0.0;
    for (std::size_t p = piece; p + 1 < pieces.size() && pieces[p].first < b; ++p) {
      const double lo = std::max(a, pieces[p].first);
      const double hi = std::min(b, pieces[p + 1].first);
      if (hi > lo) acc += pieces[p].second * (hi - lo);
    }
    sv.y[k] = acc / sv.dt;
  }
  return sv;
}

std::vector<double> autocovariance(const NoiseSpectrum& spec, std::span<const double> lags,
                                   const QuadratureConfig& cfg) {
  cfg.validate();
  for (double lag : lags) {
    if (!(lag >= 0.0)) throw Error(ErrorKind::OutOfRange, "lags must be non-negative");
  }
  std::vector<double> out(lags.size(), 0.0);
  if (spec.is_zero()) return out;
  const double hi = power_cutoff(spec);
  const double lo = power_floor(spec);
  const auto breaks = spec.breakpoints();
  parallel_for(
      lags.size(),
      [&](std::size_t i) {
        const double lag = lags[i];
        double width = (hi - lo) / 16.0;
        if (lag > 0.0) width = std::min(width, std::numbers::pi / (4.0 * lag));
        const auto q = integrate_panels([&](double w) { return spec(w) * std::cos(w * lag); }, lo,
                                        hi, width, breaks, cfg);
        out[i] = q.value / std::numbers::pi;
      },
      16);
  return out;
}

double filter_normalization(const PulseSequence& seq) noexcept {
  return seq.size() == 0 ? 0.25 : 1.0;
}

double grammian_chi(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
                    std::size_t steps, const QuadratureConfig& cfg, Sampling mode) {
  const SamplingVector sv = sampling_vector(seq, tau, steps, mode);
  if (spec.is_zero()) return 0.0;
  const double support = spec.effective_support(1e-6).hi;
  if (sv.dt * support > std::numbers::pi / 2.0) {
    throw Error(ErrorKind::UnderResolved, "time step does not resolve the noise correlation time",
                sv.dt);
  }
  const std::size_t n = sv.y.size();
  // autocorrelation of y by lag
  std::vector<double> r(n, 0.0);
  parallel_for(
      n,
      [&](std::size_t m) {
        double acc = 0.0;
        for (std::size_t k = 0; k + m < n; ++k) acc += sv.y[k] * sv.y[k + m];
        r[m] = acc;
      },
      64);
  std::vector<double> lags(n);
  for (std::size_t m = 0; m < n; ++m) lags[m] = static_cast<double>(m) * sv.dt;
  const auto c = autocovariance(spec, lags, cfg);

  double sum = c[0] * r[0];
  double comp = 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    const double term = 2.0 * c[m] * r[m];
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return kGrammianKappa * filter_normalization(seq) * sv.dt * sv.dt * (sum + comp);
}

MonteCarloResult monte_carlo_w(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
                               std::size_t realizations, std::size_t steps, std::uint64_t seed) {
  if (realizations < 100) throw Error(ErrorKind::InvalidArgument, "need at least 100 realizations");
  const SamplingVector sv = sampling_vector(seq, tau, steps);
  MonteCarloResult res;
  res.realizations = realizations;
  res.steps = steps;
  res.seed = seed;
  if (spec.is_zero()) return res;

  const FrequencyInterval band = spec.effective_support(1e-8);
  const double lo = band.lo, hi = band.hi;
  const auto modes = static_cast<std::size_t>(
      std::max(256.0, std::ceil((hi - lo) * tau / 0.02)));
  res.modes = modes;
  const double dw = (hi - lo) / static_cast<double>(modes);

  // Y_k = sum_m y_m e^{i w_k t_m} dt; the phase of one realization is then
  // sum_k a_k Re(e^{i phi_k} Y_k)
  std::vector<std::complex<double>> y_hat(modes);
  std::vector<double> amp(modes);
  parallel_for(
      modes,
      [&](std::size_t k) {
        const double w = lo + (static_cast<double>(k) + 0.5) * dw;
        amp[k] = std::sqrt(2.0 * spec(w) * dw / std::numbers::pi);
        std::complex<double> acc = 0.0;
        const std::complex<double> rot = std::polar(1.0, w * sv.dt);
        std::complex<double> z;
        for (std::size_t m = 0; m < steps; ++m) {
          if (m % 256 == 0) z = std::polar(1.0, w * sv.t[m]);
          acc += sv.y[m] * z;
          z *= rot;
        }
        y_hat[k] = acc * sv.dt;
      },
      8);

  const double kappa = 2.0 * std::sqrt(filter_normalization(seq));
  std::vector<double> samples(realizations);
  parallel_for(
      realizations,
      [&](std::size_t i) {
        std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                           static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
        std::mt19937_64 rng(sseq);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        double phi = 0.0;
        for (std::size_t k = 0; k < modes; ++k) {
          const double p = phase(rng);
          phi += amp[k] * (std::cos(p) * y_hat[k].real() - std::sin(p) * y_hat[k].imag());
        }
        samples[i] = std::cos(kappa * phi);
      },
      64);

  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(realizations);
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= static_cast<double>(realizations - 1);
  res.w = mean;
  res.stderr_w = std::sqrt(var / static_cast<double>(realizations));
  return res;
}

OracleReport oracle_report(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
                           std::size_t steps, std::size_t realizations, std::uint64_t seed,
                           const QuadratureConfig& cfg) {
  OracleReport rep;
  rep.chi_freq = chi(seq, spec, tau, cfg).chi;
  rep.chi_grammian = grammian_chi(seq, spec, tau, steps, cfg);
  const double diff = std::abs(rep.chi_grammian - rep.chi_freq);
  rep.rel_diff = rep.chi_freq > 0.0 ? diff / rep.chi_freq : diff;
  rep.steps = steps;
  const auto mc = monte_carlo_w(seq, spec, tau, realizations, steps, seed);
  rep.w_mc = mc.w;
  rep.stderr_w = mc.stderr_w;
  rep.realizations = realizations;
  rep.seed = seed;
  return rep;
}

}  // namespace ddfilter
