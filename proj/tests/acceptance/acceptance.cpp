// One PASS/FAIL line per acceptance criterion. Exits nonzero when any fails.
// Pass --extended for the slower informational runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <ddfilter/coherence.hpp>
#include <ddfilter/error.hpp>
#include <ddfilter/filter.hpp>
#include <ddfilter/metrics.hpp>
#include <ddfilter/optimize.hpp>
#include <ddfilter/oracle.hpp>
#include <ddfilter/sequences.hpp>
#include <ddfilter/spectra.hpp>

using namespace ddfilter;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<Family> kFamilies{Family::CPMG, Family::PDD, Family::UDD};

std::string name(Family f, int n) { return std::string(to_string(f)) + std::to_string(n); }

// Simpson's rule on a uniform grid, independent of the library quadrature.
double simpson_mean(const std::function<double(double)>& f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0 / (b - a);
}

Outcome hahn_echo() {
  const auto seq = make_canonical(Family::CPMG, 1);
  double worst = 0.0;
  for (double u : log_grid(1e-2, 1e3, 300)) {
    const double expected = 16.0 * std::pow(std::sin(u / 4.0), 4);
    worst = std::max(worst, std::abs(filter_value(seq, u) - expected) / expected);
  }
  return {worst <= 1e-12, fmt("max rel err %.3g (tol 1e-12)", worst)};
}

Outcome zero_frequency_null() {
  double worst = 0.0;
  std::string where;
  for (Family f : kFamilies) {
    for (int n = 1; n <= 20; ++n) {
      const double v = filter_value(make_canonical(f, n), 1e-8);
      if (v >= worst) {
        worst = v;
        where = name(f, n);
      }
    }
  }
  return {worst <= 1e-12, fmt("max F(1e-8) = %.3g at %s", worst, where.c_str())};
}

Outcome passband_mean() {
  bool ok = true;
  double worst = 0.0;
  std::string where, failures;
  for (Family f : kFamilies) {
    for (int n : {1, 4, 7, 10, 20}) {
      const auto seq = make_canonical(f, n);
      const double mean =
          simpson_mean([&](double u) { return filter_value(seq, u); }, 100 * kPi, 200 * kPi, 200000);
      const double dev = std::abs(mean / (4.0 * n + 2.0) - 1.0);
      if (dev > worst) {
        worst = dev;
        where = name(f, n);
      }
      if (dev > 0.02) {
        ok = false;
        failures += fmt(" %s=%.1f%%", name(f, n).c_str(), 100 * dev);
      }
    }
  }
  return {ok, fmt("worst |mean/(4n+2)-1| = %.2f%% at %s (tol 2%%)%s%s", 100 * worst, where.c_str(),
                  failures.empty() ? "" : "; over:", failures.c_str())};
}

double slope(Family f, int n, const FilterVariant& v = {}) {
  return rolloff(sample_filter(make_canonical(f, n), 1e-4, 1e4, 200, v)).db_per_octave;
}

Outcome rolloff_laws() {
  bool ok = true;
  std::string d;
  const auto check = [&](const std::string& label, double s, double lo, double hi) {
    const bool in = s >= lo && s <= hi;
    ok = ok && in;
    d += fmt(" %s=%.2f%s", label.c_str(), s, in ? "" : "(!)");
  };
  check("fid", slope(Family::FID, 0), 6.02 - 0.3, 6.02 + 0.3);
  for (int n : {2, 4, 6, 8, 10}) check(name(Family::PDD, n), slope(Family::PDD, n), 5.52, 6.52);
  for (int n : {4, 6, 8}) check(name(Family::CPMG, n), slope(Family::CPMG, n), 17.1, 19.1);
  for (int n = 2; n <= 8; ++n) {
    const double target = 6.0 * (n + 1);
    check(name(Family::UDD, n), slope(Family::UDD, n), 0.95 * target, 1.05 * target);
  }
  return {ok, "dB/oct:" + d};
}

Outcome udd_vs_cpmg() {
  const auto udd = make_canonical(Family::UDD, 10);
  const auto cpmg = make_canonical(Family::CPMG, 10);
  const auto grid = log_grid(1e-3, 1e3, 1200);
  double min_low = INFINITY;
  for (double u : grid) {
    if (u >= 1.0) break;
    const double a = filter_value(udd, u), b = filter_value(cpmg, u);
    if (b > 0.0 && (a > 1e-30 || b > 1e-30)) min_low = std::min(min_low, a / b);
  }
  const double uf1 = omega_f1(sample_filter(udd, 1e-3, 1e3, 200));
  // longest run of ratio > 1 intersecting [u_f1/2, 2 u_f1]
  double best_lo = 0, best_hi = 0;
  double run_lo = -1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool above = filter_value(udd, grid[i]) > filter_value(cpmg, grid[i]);
    if (above && run_lo < 0) run_lo = grid[i];
    if ((!above || i + 1 == grid.size()) && run_lo > 0) {
      const double run_hi = above ? grid[i] : grid[i - 1];
      if (run_hi >= uf1 / 2 && run_lo <= 2 * uf1 && run_hi - run_lo > best_hi - best_lo) {
        best_lo = run_lo;
        best_hi = run_hi;
      }
      run_lo = -1;
    }
  }
  const bool band = best_hi > best_lo;
  return {min_low <= 1e-10 && band,
          fmt("min ratio below u=1 %.3g (<= 1e-10); ratio>1 band [%.3g, %.3g] near u_f1=%.3g", min_low,
              best_lo, best_hi, uf1)};
}

Outcome quantization() {
  const auto db = [](double f) { return 10.0 * std::log10(f); };
  const auto udd = make_canonical(Family::UDD, 10);
  const auto cpmg = make_canonical(Family::CPMG, 10);
  const double du = db(filter_value(quantize_timing(udd, 1e-7), 1.0)) - db(filter_value(udd, 1.0));
  const double dc = db(filter_value(quantize_timing(cpmg, 1e-2), 1.0)) - db(filter_value(cpmg, 1.0));
  return {du >= 60 && du <= 100 && std::abs(dc) < 1.0,
          fmt("UDD10 p=1e-7 rise %.2f dB (60..100); CPMG10 p=1e-2 change %.3g dB (<1)", du, dc)};
}

Outcome finite_width() {
  std::vector<double> s;
  for (double r : {0.0, 1e-4, 1e-3, 1e-2}) {
    s.push_back(slope(Family::UDD, 7, r > 0 ? FilterVariant::finite_width(r) : FilterVariant::ideal()));
  }
  bool dec = true;
  for (std::size_t i = 1; i < s.size(); ++i) dec = dec && s[i] < s[i - 1];
  return {dec && s.back() < 12.0,
          fmt("UDD7 slopes %.2f, %.2f, %.2f, %.2f dB/oct (decreasing, last < 12)", s[0], s[1], s[2], s[3])};
}

Outcome oracle_equivalence() {
  bool ok = true;
  double worst_rel = 0.0, worst_z = 0.0;
  for (const auto& spec : {white_band(1.0, 5.0), ohmic(1.0, 5.0)}) {
    for (const auto& seq : {make_canonical(Family::FID, 0), make_canonical(Family::CPMG, 4),
                            make_canonical(Family::UDD, 6)}) {
      const auto r = oracle_report(seq, spec, 1.0, 8192, 10000, 1);
      const double z = std::abs(r.w_mc - std::exp(-r.chi_freq)) / r.stderr_w;
      worst_rel = std::max(worst_rel, r.rel_diff);
      worst_z = std::max(worst_z, z);
      ok = ok && r.rel_diff < 0.01 && z <= 3.0;
    }
  }
  return {ok, fmt("6 cases: max rel_diff %.3g (< 0.01), max |W_mc - W|/stderr %.2f (<= 3)", worst_rel, worst_z)};
}

Outcome white_calibration() {
  bool ok = true;
  std::string d;
  for (double wt : {200.0, 500.0, 2000.0}) {
    const double c = chi(make_canonical(Family::FID, 0), white_band(1.0, wt), 1.0).chi;
    const double dev = std::abs(c / 0.5 - 1.0);
    ok = ok && dev <= 0.005;
    d += fmt(" w_hi*tau=%g: %.4f%%", wt, 100 * dev);
  }
  return {ok, "|chi/(S0 tau/2) - 1|:" + d + " (tol 0.5%)"};
}

Outcome lodd_dominance() {
  bool ok = true, gain = false;
  std::string d;
  for (double wd : {2.0, 5.0, 10.0}) {
    const auto spec = ohmic(1.0, wd);
    const auto r = optimize_lodd(spec, 6, 1.0);
    double base = INFINITY, udd = 0;
    for (Family f : kFamilies) {
      const double c = chi(make_canonical(f, 6), spec, 1.0).chi;
      base = std::min(base, c);
      if (f == Family::UDD) udd = c;
    }
    ok = ok && r.diagnostics.converged && r.objective <= base + 1e-12;
    gain = gain || r.objective < 0.99 * udd;
    d += fmt(" tau*wD=%g: %.3g/%.3g%s", wd, r.objective, udd, r.diagnostics.converged ? "" : "(unconverged)");
  }
  return {ok && gain, "chi_LODD/chi_UDD:" + d};
}

Outcome ofdd_area() {
  bool ok = true;
  std::string d;
  for (double um : {5.0, 10.0}) {
    const auto o = optimize_ofdd(6, um);
    const auto l = optimize_lodd(ohmic(1.0, um), 6, 1.0);
    // independent area of UDD by Simpson's rule
    const auto udd = make_canonical(Family::UDD, 6);
    const double a_udd = um * simpson_mean([&](double u) { return filter_value(udd, u); }, 0.0, um, 20000);
    const double a_ofdd = filter_area(o.sequence, um);
    double dmax = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      dmax = std::max(dmax, std::abs(o.sequence.deltas()[j] - l.sequence.deltas()[j]));
    }
    ok = ok && a_ofdd <= a_udd;
    d += fmt(" u_max=%g: A_OFDD %.3g vs A_UDD %.3g, max|dOFDD-dLODD| %.3g;", um, a_ofdd, a_udd, dmax);
  }
  return {ok, d};
}

Outcome badd(double tau, int n_max) {
  const auto spec = supra_ohmic(1.14e-26, 3e12);
  const double tau_switch = 0.1e-12;
  const auto r = optimize_badd(spec, tau, tau_switch, n_max);
  const int mo = max_order(Family::UDD, tau, tau_switch);
  // best feasible UDD recomputed with the frequency-domain integral
  double udd_best = INFINITY;
  int udd_n = 0;
  for (int n = 1; n <= mo; ++n) {
    const double c = chi(make_canonical(Family::UDD, n), spec, tau).chi;
    if (c < udd_best) {
      udd_best = c;
      udd_n = n;
    }
  }
  const double c_best = chi(r.best.sequence, spec, tau).chi;
  const int n = static_cast<int>(r.best.sequence.size());
  const bool gap_ok = min_gap(r.best.sequence) * tau >= tau_switch * (1 - 1e-9);
  return {n > mo && c_best < udd_best && gap_ok,
          fmt("tau=%g ps: best n=%d chi %.4g (min gap %.3g ps); UDD max_order %d, best feasible UDD n=%d chi %.4g",
              tau * 1e12, n, c_best, min_gap(r.best.sequence) * tau * 1e12, mo, udd_n, udd_best)};
}

}  // namespace

int main(int argc, char** argv) {
  const bool extended = argc > 1 && std::string(argv[1]) == "--extended";
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Hahn-echo closed form", 1, hahn_echo},
      {2, "Zero-frequency null", 1, zero_frequency_null},
      {3, "Passband mean 4n+2", 10, passband_mean},
      {4, "Rolloff laws", 10, rolloff_laws},
      {5, "UDD/CPMG comparison", 5, udd_vs_cpmg},
      {6, "Timing quantization", 1, quantization},
      {7, "Finite pulse width", 5, finite_width},
      {8, "Oracle equivalence", 60, oracle_equivalence},
      {9, "White-noise FID calibration", 1, white_calibration},
      {10, "LODD dominance", 300, lodd_dominance},
      {11, "OFDD area dominance", 300, ofdd_area},
      {12, "BADD feasibility and dominance", 600, [] { return badd(100e-12, 100); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s: %s [%.2f s / %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(),
                dt, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  if (extended) {
    const auto o = badd(10e-12, 99);
    std::printf("INFO 12 BADD at 10 ps: %s (%s)\n", o.detail.c_str(), o.pass ? "dominates" : "does not dominate");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
