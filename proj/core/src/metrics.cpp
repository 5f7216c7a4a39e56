#include "ddfilter/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddfilter/error.hpp"
#include "ddfilter/quadrature.hpp"

namespace ddfilter {
namespace {

double eval_at(const FilterSamples& samples, double u) {
  return evaluate_prepared(samples.sequence, u, samples.variant);
}

}  // namespace

double omega_f1(const FilterSamples& samples) {
  const auto& u = samples.u;
  if (samples.sequence.size() == 0) {
    // sin^2(u/2) touches 1 at its first maximum without crossing
    if (u.front() > std::numbers::pi || u.back() < std::numbers::pi) {
      throw Error(ErrorKind::NoCrossing, "grid does not contain u = pi");
    }
    return std::numbers::pi;
  }
  const auto& f = samples.values;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (f[i] < 1.0) continue;
    if (i == 0) {
      throw Error(ErrorKind::NoCrossing, "F >= 1 already at the first grid point");
    }
    double lo = u[i - 1];
    double hi = u[i];
    if (f[i] == 1.0) return hi;
    // F(lo) < 1 <= F(hi)
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (eval_at(samples, mid) < 1.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double flo = eval_at(samples, lo);
    const double fhi = eval_at(samples, hi);
    return std::abs(flo - 1.0) < std::abs(fhi - 1.0) ? lo : hi;
  }
  throw Error(ErrorKind::NoCrossing, "F stays below 1 on the whole grid");
}

RolloffFit rolloff(const FilterSamples& samples, const FitWindow& window) {
  if (!(window.lo_factor > 0.0) || !(window.hi_factor > window.lo_factor)) {
    throw Error(ErrorKind::WindowOutOfRange, "fit window must satisfy 0 < lo < hi");
  }
  RolloffFit fit;
  fit.u_f1 = omega_f1(samples);
  const double lo = fit.u_f1 * window.lo_factor;
  const double hi = fit.u_f1 * window.hi_factor;
  if (lo < samples.u.front() || hi > samples.u.back()) {
    throw Error(ErrorKind::WindowOutOfRange, "fit window extends beyond the sample grid");
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  bool floor_hit = false;
  for (std::size_t i = 0; i < samples.u.size(); ++i) {
    const double ui = samples.u[i];
    if (ui < lo || ui > hi) continue;
    const double fi = samples.values[i];
    if (fi < kCleanFloor) {
      floor_hit = floor_hit || fi < kFilterFloor;
      continue;
    }
    if (fi > kCleanCeiling) continue;
    const double x = std::log2(ui);
    const double y = 10.0 * std::log10(fi);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    if (count == 0) fit.u_lo = ui;
    fit.u_hi = ui;
    ++count;
  }
  if (count < 3) {
    if (floor_hit) {
      throw Error(ErrorKind::NumericFloor, "fit window lies on the numeric floor");
    }
    throw Error(ErrorKind::WindowOutOfRange, "fewer than three clean samples in the fit window");
  }
  const double c = static_cast<double>(count);
  const double denom = c * sxx - sx * sx;
  fit.db_per_octave = (c * sxy - sx * sy) / denom;
  fit.points = count;
  return fit;
}

PassbandStats passband_stats(const FilterSamples& samples, std::size_t n, double span_lo,
                             double span_hi) {
  if (!(span_lo > 0.0) || !(span_hi > span_lo)) {
    throw Error(ErrorKind::OutOfRange, "passband span must satisfy 0 < lo < hi");
  }
  const double u_f1 = omega_f1(samples);
  if (samples.u.back() < 10.0 * u_f1) {
    throw Error(ErrorKind::InsufficientSpan, "grid must extend a decade above u_f1");
  }
  PassbandStats stats;
  stats.span_lo = span_lo;
  stats.span_hi = span_hi;

  QuadratureConfig cfg;
  cfg.rel_tol = 1e-12;
  const auto q = integrate_panels([&](double u) { return eval_at(samples, u); }, span_lo, span_hi,
                                  2.0 * std::numbers::pi / 16.0, {}, cfg);
  stats.mean = q.value / (span_hi - span_lo);

  const auto points = static_cast<std::size_t>(
      std::ceil((span_hi - span_lo) / (2.0 * std::numbers::pi) * 64.0)) + 1;
  stats.max = 0.0;
  stats.min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points; ++i) {
    const double u = span_lo + (span_hi - span_lo) * static_cast<double>(i) /
                                   static_cast<double>(points - 1);
    const double f = eval_at(samples, u);
    stats.max = std::max(stats.max, f);
    stats.min = std::min(stats.min, f);
  }
  stats.ripple_db = 10.0 * std::log10(stats.max / std::max(stats.min, kFilterFloor));
  const double target = 4.0 * static_cast<double>(n) + 2.0;
  stats.deviation = std::abs(stats.mean - target) / target;
  return stats;
}

BandpassProfile bandpass_profile(const PulseSequence& seq, double tau,
                                 const std::vector<double>& omega_grid) {
  if (omega_grid.size() < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 frequencies");
  for (std::size_t i = 1; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > omega_grid[i - 1])) {
      throw Error(ErrorKind::NonMonotonic, "omega grid must be strictly increasing");
    }
  }
  std::vector<double> g(omega_grid.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = modified_filter_value(seq, omega_grid[i], tau);

  BandpassProfile p;
  const auto peak = static_cast<std::size_t>(std::max_element(g.begin(), g.end()) - g.begin());
  if (peak == 0) {
    p.plateau_value = g.front();
    return p;
  }
  p.has_peak = true;
  p.peak_omega = omega_grid[peak];
  p.peak_value = g[peak];
  p.plateau_value = g.front();

  const double half = 0.5 * g[peak];
  auto crossing = [&](std::size_t a, std::size_t b) {
    // g[a] <= half < g[b] or the reverse; linear interpolation in omega
    const double t = (half - g[a]) / (g[b] - g[a]);
    return omega_grid[a] + t * (omega_grid[b] - omega_grid[a]);
  };
  std::size_t i = peak;
  while (i > 0 && g[i] > half) --i;
  p.half_lo = g[i] > half ? omega_grid.front() : crossing(i, i + 1);
  std::size_t k = peak;
  while (k + 1 < g.size() && g[k] > half) ++k;
  p.half_hi = g[k] > half ? omega_grid.back() : crossing(k - 1, k);
  p.bandwidth = p.half_hi - p.half_lo;

  std::size_t lobe_lo = peak;
  while (lobe_lo > 0 && g[lobe_lo - 1] < g[lobe_lo]) --lobe_lo;
  std::size_t lobe_hi = peak;
  while (lobe_hi + 1 < g.size() && g[lobe_hi + 1] < g[lobe_hi]) ++lobe_hi;
  p.lobe_lo = omega_grid[lobe_lo];
  p.lobe_hi = omega_grid[lobe_hi];

  double outside = 0.0;
  bool any = false;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j >= lobe_lo && j <= lobe_hi) continue;
    outside = std::max(outside, g[j]);
    any = true;
  }
  if (!any) {
    throw Error(ErrorKind::InsufficientSpan, "grid does not extend past the main lobe");
  }
  p.out_of_band_rejection_db = 10.0 * std::log10(g[peak] / std::max(outside, kFilterFloor));
  return p;
}

RatioSamples filter_ratio(const PulseSequence& a, const PulseSequence& b,
                          const std::vector<double>& u_grid, const FilterVariant& variant) {
  const FilterSamples fa = sample_filter_on(a, u_grid, variant);
  const FilterSamples fb = sample_filter_on(b, u_grid, variant);
  RatioSamples out;
  out.u = u_grid;
  out.ratio.resize(u_grid.size());
  out.flag.resize(u_grid.size());
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double x = fa.values[i];
    const double y = fb.values[i];
    if ((x < kRatioMask && y < kRatioMask) || y == 0.0) {
      out.ratio[i] = std::numeric_limits<double>::quiet_NaN();
      out.flag[i] = RatioFlag::Masked;
      continue;
    }
    const double r = x / y;
    out.ratio[i] = r;
    if (std::abs(r - 1.0) <= 1e-12) {
      out.flag[i] = RatioFlag::Equal;
    } else {
      out.flag[i] = r < 1.0 ? RatioFlag::Below : RatioFlag::Above;
    }
  }
  return out;
}

std::vector<Band> contiguous_bands(const RatioSamples& ratio, RatioFlag flag) {
  std::vector<Band> bands;
  for (std::size_t i = 0; i < ratio.flag.size(); ++i) {
    if (ratio.flag[i] != flag) continue;
    if (!bands.empty() && bands.back().last + 1 == i) {
      bands.back().last = i;
      bands.back().hi = ratio.u[i];
    } else {
      bands.push_back({ratio.u[i], ratio.u[i], i, i});
    }
  }
  return bands;
}

FilterMetrics compute_metrics(const FilterSamples& samples, const FitWindow& window) {
  FilterMetrics m;
  m.rolloff = rolloff(samples, window);
  m.u_f1 = m.rolloff.u_f1;
  if (samples.u.back() >= 10.0 * m.u_f1) {
    m.passband = passband_stats(samples, samples.n);
  }
  return m;
}

}  // namespace ddfilter
