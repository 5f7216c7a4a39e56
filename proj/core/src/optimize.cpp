#include "ddfilter/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <variant>

#include <boost/math/quadrature/gauss.hpp>

#include "ddfilter/coherence.hpp"
#include "ddfilter/error.hpp"
#include "ddfilter/filter.hpp"
#include "ddfilter/parallel.hpp"

namespace ddfilter {
namespace {

using Vec = std::vector<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct NmOutcome {
  Vec x;
  double f = kInf;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

// Nelder-Mead with dimension-adapted coefficients (Gao & Han) above two
// dimensions, where the classic ones stall.
NmOutcome nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, double step,
                      int max_iter, double tol) {
  const std::size_t d = x0.size();
  const double dd = static_cast<double>(d);
  const bool adaptive = d > 2;
  const double expand = adaptive ? 1.0 + 2.0 / dd : 2.0;
  const double contract = adaptive ? 0.75 - 0.5 / dd : 0.5;
  const double shrink = adaptive ? 1.0 - 1.0 / dd : 0.5;

  NmOutcome out;
  auto eval = [&](const Vec& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  };

  std::vector<Vec> pts(d + 1, x0);
  Vec fv(d + 1);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(pts[i]);

  std::vector<std::size_t> order(d + 1);
  Vec centroid(d), xr(d), xe(d), xc(d);
  auto blend = [&](Vec& dst, double t, const Vec& from) {
    // dst = centroid + t * (from - centroid)
    for (std::size_t k = 0; k < d; ++k) dst[k] = centroid[k] + t * (from[k] - centroid[k]);
  };

  for (; out.iterations < max_iter; ++out.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[d - 1];
    if (std::isfinite(fv[worst]) &&
        fv[worst] - fv[best] <= tol * std::abs(fv[best]) + std::numeric_limits<double>::min()) {
      out.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k];
    }
    for (double& c : centroid) c /= dd;

    blend(xr, -1.0, pts[worst]);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      blend(xe, -expand, pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    if (fr < fv[worst]) {
      blend(xc, contract, xr);
      const double fc = eval(xc);
      if (fc <= fr) {
        pts[worst] = xc;
        fv[worst] = fc;
        continue;
      }
    } else {
      blend(xc, contract, pts[worst]);
      const double fc = eval(xc);
      if (fc < fv[worst]) {
        pts[worst] = xc;
        fv[worst] = fc;
        continue;
      }
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < d; ++k) {
        pts[i][k] = pts[best][k] + shrink * (pts[i][k] - pts[best][k]);
      }
      fv[i] = eval(pts[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  out.x = pts[best];
  out.f = fv[best];
  return out;
}

Vec softmax_gaps(const Vec& x) {
  // last coordinate pinned at zero
  double m = 0.0;
  for (double v : x) m = std::max(m, v);
  Vec g(x.size() + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += g[i] = std::exp(x[i] - m);
  sum += g.back() = std::exp(-m);
  for (double& v : g) v /= sum;
  return g;
}

Vec log_ratios(const Vec& gaps) {
  Vec x(gaps.size() - 1);
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) x[i] = std::log(gaps[i] / gaps.back());
  return x;
}

Vec normalized(Vec g) {
  const double total = std::accumulate(g.begin(), g.end(), 0.0);
  for (double& v : g) v /= total;
  return g;
}

bool invalid_sequence(ErrorKind kind) {
  return kind == ErrorKind::OutOfRange || kind == ErrorKind::NonMonotonic ||
         kind == ErrorKind::GapViolation || kind == ErrorKind::InvalidArgument;
}

// Objective over normalized gaps; invalid pulse layouts rank last.
struct Problem {
  int n = 0;
  std::function<double(const Vec&)> objective;
  /// Active lower bound on segments: optimize directly in gap space and
  /// project, instead of the unconstrained log-ratio coordinates.
  std::optional<double> lower;

  double operator()(const Vec& gaps) const {
    try {
      return objective(gaps);
    } catch (const Error& e) {
      if (invalid_sequence(e.kind())) return kInf;
      throw;
    }
  }
  Vec feasible(const Vec& gaps) const {
    return lower ? project_gaps(gaps, *lower) : normalized(gaps);
  }
};

struct Start {
  std::string label;
  Vec gaps;
};

struct Candidate {
  Vec gaps;
  double f = kInf;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool raw = false;
  std::size_t start = 0;
};

// Coordinate pattern search: nudge one segment, restore feasibility, keep
// strict improvements. Ends with a full pass at the finest step.
void polish(const Problem& p, Candidate& c, double tol) {
  static constexpr double kSteps[] = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  for (double s : kSteps) {
    for (int sweep = 0; sweep < 1000; ++sweep) {
      bool improved = false;
      for (std::size_t i = 0; i < c.gaps.size(); ++i) {
        for (double sign : {1.0, -1.0}) {
          Vec trial = c.gaps;
          trial[i] += sign * s;
          if (!(trial[i] > 0.0)) continue;
          trial = p.feasible(trial);
          ++c.evaluations;
          const double ft = p(trial);
          if (ft < c.f - tol * std::abs(c.f)) {
            c.gaps = std::move(trial);
            c.f = ft;
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
  }
}

Candidate run_start(const Problem& p, const Start& s, std::size_t index,
                    const OptimizationConfig& cfg) {
  Candidate c;
  c.start = index;
  const Vec g0 = p.feasible(s.gaps);
  NmOutcome nm;
  if (p.lower) {
    const double lower = *p.lower;
    const double scale = (std::abs(p(g0)) + std::numeric_limits<double>::min()) *
                         static_cast<double>((p.n + 1) * (p.n + 1));
    auto f = [&](const Vec& x) {
      Vec g;
      try {
        g = project_gaps(x, lower);
      } catch (const Error&) {
        return kInf;
      }
      double dist = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dist += (x[i] - g[i]) * (x[i] - g[i]);
      return p(g) + scale * dist;
    };
    nm = nelder_mead(f, g0, cfg.initial_step / (p.n + 1), cfg.max_iterations, cfg.tolerance);
    c.gaps = project_gaps(nm.x, lower);
    c.f = p(c.gaps);
  } else {
    auto f = [&](const Vec& x) { return p(softmax_gaps(x)); };
    nm = nelder_mead(f, log_ratios(g0), cfg.initial_step, cfg.max_iterations, cfg.tolerance);
    c.gaps = softmax_gaps(nm.x);
    c.f = nm.f;
  }
  c.iterations = nm.iterations;
  c.evaluations = nm.evaluations;
  c.converged = nm.converged;
  polish(p, c, cfg.tolerance);
  return c;
}

std::vector<Start> make_starts(int n, const OptimizationConfig& cfg) {
  std::vector<Start> starts;
  for (Family fam : {Family::UDD, Family::CPMG, Family::PDD}) {
    const auto seq = make_canonical(fam, n);
    starts.push_back({seq.label(), segments(seq)});
  }
  const Vec udd = starts.front().gaps;
  for (int k = 0; k < cfg.restarts; ++k) {
    std::seed_seq sseq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                       static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(sseq);
    std::normal_distribution<double> jitter(0.0, 0.25);
    Vec g = udd;
    for (double& v : g) v *= std::exp(jitter(rng));
    starts.push_back({"jitter:" + std::to_string(k), normalized(std::move(g))});
  }
  return starts;
}

struct Outcome {
  Candidate best;
  std::string label;
  int iterations = 0;
  int evaluations = 0;
  bool degenerate = false;
  std::vector<double> raw_values;
};

Outcome run_problem(const Problem& p, const std::vector<Start>& starts,
                    const OptimizationConfig& cfg, bool concurrent) {
  std::vector<Candidate> runs(starts.size());
  auto body = [&](std::size_t i) { runs[i] = run_start(p, starts[i], i, cfg); };
  if (concurrent) {
    parallel_for(starts.size(), body);
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) body(i);
  }

  Outcome out;
  std::vector<Candidate> all = runs;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    Candidate raw;
    raw.gaps = p.feasible(starts[i].gaps);
    raw.f = p(raw.gaps);
    raw.raw = true;
    raw.start = i;
    raw.converged = runs[i].converged;
    out.raw_values.push_back(raw.f);
    all.push_back(std::move(raw));
  }
  for (const auto& r : runs) {
    out.iterations += r.iterations;
    out.evaluations += r.evaluations;
  }
  std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
    if (a.f != b.f) return a.f < b.f;
    if (a.raw != b.raw) return !a.raw;
    return a.start < b.start;
  });
  double lo = kInf, hi = -kInf;
  for (const auto& c : all) {
    if (!std::isfinite(c.f)) continue;
    lo = std::min(lo, c.f);
    hi = std::max(hi, c.f);
  }
  out.degenerate = lo == hi;
  if (out.degenerate) {
    // every layout is equally good: hand back the first baseline untouched
    auto it = std::find_if(all.begin(), all.end(),
                           [](const Candidate& c) { return c.raw && c.start == 0; });
    out.best = *it;
  } else {
    out.best = all.front();
  }
  out.label = starts[out.best.start].label + (out.best.raw ? "" : "+search");
  return out;
}

double chi_value(const PulseSequence& seq, const NoiseSpectrum& spec, double tau,
                 const QuadratureConfig& q) {
  try {
    return chi(seq, spec, tau, q).chi;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ToleranceNotMet && e.value()) return *e.value();
    throw;
  }
}

OptimizationResult assemble(const Outcome& o, const std::vector<Start>& starts, int n,
                            const std::string& label, double lower) {
  OptimizationResult r;
  r.sequence = from_segments(o.best.gaps, 0.0, label + ":" + std::to_string(n));
  r.objective = o.best.f;
  for (std::size_t i = 0; i < 3 && i < starts.size(); ++i) {
    r.baselines.push_back({starts[i].label, o.raw_values[i]});
  }
  r.diagnostics.iterations = o.iterations;
  r.diagnostics.evaluations = o.evaluations;
  r.diagnostics.restarts = static_cast<int>(starts.size());
  r.diagnostics.converged = o.best.converged;
  r.diagnostics.degenerate = o.degenerate;
  r.diagnostics.constraint_slack = min_gap(r.sequence) - lower;
  r.diagnostics.winning_start = o.label;
  return r;
}

void check_n(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "optimization needs n >= 1");
}

}  // namespace

void OptimizationConfig::validate() const {
  if (restarts < 0) throw Error(ErrorKind::BadConfig, "restarts must be >= 0");
  if (max_iterations < 0) throw Error(ErrorKind::BadConfig, "max_iterations must be >= 0");
  if (!(tolerance > 0.0)) throw Error(ErrorKind::BadConfig, "tolerance must be positive");
  if (!(initial_step > 0.0)) throw Error(ErrorKind::BadConfig, "initial_step must be positive");
  if (min_gap_fraction && !(*min_gap_fraction > 0.0 && *min_gap_fraction < 0.5)) {
    throw Error(ErrorKind::BadConfig, "min_gap_fraction must lie in (0, 0.5)");
  }
  quadrature.validate();
}

double OptimizationResult::best_baseline() const {
  double best = kInf;
  for (const auto& b : baselines) best = std::min(best, b.value);
  return best;
}

std::vector<double> project_gaps(std::span<const double> gaps, double lower) {
  const std::size_t m = gaps.size();
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "no gaps to project");
  const double mass = 1.0 - static_cast<double>(m) * lower;
  if (lower < 0.0 || mass < -1e-15) {
    throw Error(ErrorKind::Infeasible, "minimum gap leaves no room for the segments");
  }
  Vec y(gaps.begin(), gaps.end());
  for (double& v : y) v -= lower;
  Vec sorted = y;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    cumulative += sorted[j];
    const double t = (cumulative - std::max(mass, 0.0)) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  Vec out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = std::max(y[i] - theta, 0.0) + lower;
  return out;
}

OptimizationResult optimize_lodd(const NoiseSpectrum& spec, int n, double tau,
                                 const OptimizationConfig& cfg) {
  cfg.validate();
  check_n(n);
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau must be positive");
  Problem p;
  p.n = n;
  p.lower = cfg.min_gap_fraction;
  p.objective = [&](const Vec& gaps) {
    return chi_value(from_segments(gaps), spec, tau, cfg.quadrature);
  };
  const auto starts = make_starts(n, cfg);
  const auto outcome = run_problem(p, starts, cfg, true);
  return assemble(outcome, starts, n, "lodd", cfg.min_gap_fraction.value_or(0.0));
}

double filter_area(const PulseSequence& seq, double u_max, const QuadratureConfig& cfg) {
  if (!(u_max > 0.0)) throw Error(ErrorKind::OutOfRange, "u_max must be positive");
  cfg.validate();
  const auto q = integrate_panels([&](double u) { return filter_value(seq, u); }, 0.0, u_max,
                                  2.0 * std::numbers::pi / cfg.oscillation_resolution, {}, cfg);
  if (q.error > std::max(cfg.rel_tol * q.value, cfg.abs_tol)) {
    throw Error(ErrorKind::ToleranceNotMet, "filter area did not reach tolerance", q.value);
  }
  return q.value;
}

OptimizationResult optimize_ofdd(int n, double u_max, const OptimizationConfig& cfg) {
  cfg.validate();
  check_n(n);
  if (!(u_max > 0.0)) throw Error(ErrorKind::OutOfRange, "u_max must be positive");
  Problem p;
  p.n = n;
  p.lower = cfg.min_gap_fraction;
  p.objective = [&](const Vec& gaps) {
    const auto seq = from_segments(gaps);
    try {
      return filter_area(seq, u_max, cfg.quadrature);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ToleranceNotMet && e.value()) return *e.value();
      throw;
    }
  };
  const auto starts = make_starts(n, cfg);
  const auto outcome = run_problem(p, starts, cfg, true);
  return assemble(outcome, starts, n, "ofdd", cfg.min_gap_fraction.value_or(0.0));
}

LagKernel::LagKernel(const NoiseSpectrum& spec, double tau, std::size_t points) : tau_(tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::InvalidArgument, "tau must be positive");
  if (points < 4) throw Error(ErrorKind::InvalidArgument, "lag table needs at least 4 points");
  if (const auto* s = std::get_if<SupraOhmicExp>(&spec.model())) {
    closed_ = true;
    alpha_ = s->alpha;
    a_ = 1.0 / s->omega_c;
    return;
  }
  step_ = tau / static_cast<double>(points - 1);
  table_.assign(points, 0.0);
  if (spec.is_zero()) return;

  const FrequencyInterval iv = spec.effective_support(1e-14);
  // the cosine averages out past the support; only the -1 part survives
  const double tail = spec.has_hard_cutoff() ? 0.0 : spec.tail_mass(iv.hi);

  Vec edges{iv.lo};
  for (double b : spec.breakpoints()) {
    if (b > iv.lo && b < iv.hi) edges.push_back(b);
  }
  edges.push_back(iv.hi);
  const double width = std::min(std::numbers::pi / (4.0 * tau), (iv.hi - iv.lo) / 64.0);

  using Rule = boost::math::quadrature::gauss<double, 20>;
  Vec nodes, weights;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    const auto count = static_cast<std::size_t>(std::ceil((b - a) / width));
    for (std::size_t k = 0; k < count; ++k) {
      const double lo = a + (b - a) * static_cast<double>(k) / static_cast<double>(count);
      const double hi = a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(count);
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      const auto& x = Rule::abscissa();
      const auto& w = Rule::weights();
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (double sgn : {-1.0, 1.0}) {
          if (x[i] == 0.0 && sgn < 0.0) continue;
          const double om = mid + sgn * half * x[i];
          if (!(om > 0.0)) continue;
          nodes.push_back(om);
          weights.push_back(half * w[i] * spec(om) / (om * om) * (2.0 / std::numbers::pi));
        }
      }
    }
  }

  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (points + kBlock - 1) / kBlock;
  const double h = step_;
  parallel_for(blocks, [&](std::size_t blk) {
    const std::size_t j0 = blk * kBlock;
    const std::size_t j1 = std::min(points, j0 + kBlock);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const double om = nodes[q];
      // e^{i om t} - 1, advanced by rotation to keep relative accuracy
      const double t0 = om * h * static_cast<double>(j0);
      std::complex<double> w(-2.0 * std::pow(std::sin(0.5 * t0), 2), std::sin(t0));
      const double th = om * h;
      const std::complex<double> rm1(-2.0 * std::pow(std::sin(0.5 * th), 2), std::sin(th));
      for (std::size_t j = j0; j < j1; ++j) {
        table_[j] += weights[q] * w.real();
        w += (w + 1.0) * rm1;
      }
    }
    for (std::size_t j = j0; j < j1; ++j) {
      if (j > 0) table_[j] -= (2.0 / std::numbers::pi) * tail;
    }
  });
}

double LagKernel::operator()(double t) const {
  t = std::abs(t);
  if (closed_) {
    const double a2 = a_ * a_, t2 = t * t;
    const double s = a2 + t2;
    return -(2.0 / std::numbers::pi) * alpha_ * t2 * (3.0 * a2 + t2) / (a2 * s * s);
  }
  const std::size_t m = table_.size();
  const double x = t / step_;
  auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(m) - 3);
  const double f = x - static_cast<double>(i);
  auto at = [&](std::ptrdiff_t k) { return table_[static_cast<std::size_t>(k < 0 ? -k : k)]; };
  const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
  // Catmull-Rom through nodes -1, 0, 1, 2
  return p1 + f * (0.5 * (p2 - p0) +
                   f * (p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3 + f * (1.5 * (p1 - p2) + 0.5 * (p3 - p0))));
}

double LagKernel::chi(std::span<const double> deltas) const {
  const std::size_t n = deltas.size();
  Vec theta(n + 2), c(n + 2);
  theta[0] = 0.0;
  c[0] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) {
    theta[j] = deltas[j - 1];
    c[j] = (j % 2 == 0) ? 2.0 : -2.0;
  }
  theta[n + 1] = 1.0;
  c[n + 1] = (n % 2 == 0) ? -1.0 : 1.0;
  double sum = 0.0, comp = 0.0;
  for (std::size_t k = 0; k < n + 2; ++k) {
    for (std::size_t l = k + 1; l < n + 2; ++l) {
      const double term = c[k] * c[l] * (*this)(tau_ * (theta[l] - theta[k]));
      const double t = sum + term;
      comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
      sum = t;
    }
  }
  return 2.0 * (sum + comp);
}

BaddResult optimize_badd(const NoiseSpectrum& spec, double tau, double tau_switch, int n_max,
                         const OptimizationConfig& cfg) {
  cfg.validate();
  if (!(tau > 0.0) || !(tau_switch > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tau and tau_switch must be positive");
  }
  if (tau_switch > 0.5 * tau) {
    throw Error(ErrorKind::Infeasible, "tau_switch leaves no room for a single pulse");
  }
  check_n(n_max);
  const int n_cap = std::min(n_max, static_cast<int>(std::floor(tau / tau_switch)) - 1);
  const double nominal = tau_switch / tau;
  const LagKernel kernel(spec, tau);

  struct PerN {
    Outcome outcome;
    std::vector<Start> starts;
    OptimizationResult result;
    double lower = 0.0;
  };
  std::vector<PerN> sweep(static_cast<std::size_t>(n_cap));
  parallel_for(sweep.size(), [&](std::size_t i) {
    const int n = static_cast<int>(i) + 1;
    auto& slot = sweep[i];
    // a hair above the bound so the rebuilt positions still clear it
    slot.lower = std::min(nominal * (1.0 + 1e-9), 1.0 / (n + 1));
    Problem p;
    p.n = n;
    p.lower = slot.lower;
    p.objective = [&](const Vec& gaps) {
      Vec deltas(gaps.size() - 1);
      double acc = 0.0;
      for (std::size_t k = 0; k + 1 < gaps.size(); ++k) deltas[k] = acc += gaps[k];
      return kernel.chi(deltas);
    };
    slot.starts = make_starts(n, cfg);
    slot.outcome = run_problem(p, slot.starts, cfg, false);
    slot.result = assemble(slot.outcome, slot.starts, n, "badd", nominal);
    slot.result.objective = chi_value(slot.result.sequence, spec, tau, cfg.quadrature);
  });

  BaddResult out;
  out.udd_max_order = max_order(Family::UDD, tau, tau_switch);
  out.udd_best_chi = kInf;
  std::vector<double> udd(static_cast<std::size_t>(out.udd_max_order));
  parallel_for(udd.size(), [&](std::size_t i) {
    udd[i] = chi_value(make_canonical(Family::UDD, static_cast<int>(i) + 1), spec, tau,
                       cfg.quadrature);
  });
  for (std::size_t i = 0; i < udd.size(); ++i) {
    if (udd[i] < out.udd_best_chi) {
      out.udd_best_chi = udd[i];
      out.udd_best_n = static_cast<int>(i) + 1;
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& r = sweep[i].result;
    out.per_n.push_back({static_cast<int>(i) + 1, r.objective, min_gap(r.sequence),
                         r.diagnostics.converged});
    if (r.objective < sweep[best].result.objective) best = i;
  }
  out.best = sweep[best].result;
  if (out.udd_best_n > 0 && out.udd_best_chi < out.best.objective) {
    // a feasible baseline beat every searched layout
    const auto seq = make_canonical(Family::UDD, out.udd_best_n);
    out.best.sequence = seq;
    out.best.objective = out.udd_best_chi;
    out.best.diagnostics.winning_start = seq.label();
    out.best.diagnostics.constraint_slack = min_gap(seq) - nominal;
  }
  out.best.baselines.clear();
  if (out.udd_best_n > 0) {
    out.best.baselines.push_back({"udd:" + std::to_string(out.udd_best_n), out.udd_best_chi});
  }
  const int n_best = static_cast<int>(out.best.sequence.size());
  out.best.baselines.push_back(
      {"pdd:" + std::to_string(n_best),
       chi_value(make_canonical(Family::PDD, n_best), spec, tau, cfg.quadrature)});
  return out;
}

}  // namespace ddfilter
