#include "ddfilter/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "ddfilter/error.hpp"

namespace ddfilter {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::BadConfig, what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }
bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

void check(const OhmicSharpCutoff& s) {
  require(finite_nonneg(s.amplitude), "ohmic amplitude must be finite and >= 0");
  require(finite_positive(s.cutoff), "ohmic cutoff must be positive");
}

void check(const PowerLaw& s) {
  require(finite_nonneg(s.amplitude), "power-law amplitude must be finite and >= 0");
  require(std::isfinite(s.exponent), "power-law exponent must be finite");
  require(finite_nonneg(s.omega_lo), "power-law omega_lo must be >= 0");
  require(s.omega_hi > s.omega_lo, "power-law omega_hi must exceed omega_lo");
  if (s.exponent <= -1.0 && !(s.omega_lo > 0.0)) {
    throw Error(ErrorKind::NonIntegrableSpectrum,
                "power law with exponent <= -1 needs a positive omega_lo");
  }
  if (std::isinf(s.omega_hi)) {
    if (!(s.exponent < 1.0)) {
      throw Error(ErrorKind::NonIntegrableSpectrum,
                  "unbounded power law needs exponent < 1 for S/omega^2 to converge");
    }
    if (!(s.omega_lo > 0.0)) {
      throw Error(ErrorKind::NonIntegrableSpectrum,
                  "unbounded power law needs a positive omega_lo");
    }
  }
}

void check(const WhiteBand& s) {
  require(finite_nonneg(s.level), "white-band level must be finite and >= 0");
  require(finite_positive(s.omega_hi), "white-band omega_hi must be positive");
}

void check(const SupraOhmicExp& s) {
  require(finite_nonneg(s.alpha), "supra-ohmic alpha must be finite and >= 0");
  require(finite_positive(s.omega_c), "supra-ohmic omega_c must be positive");
}

void check(const Tabulated& s) {
  require(s.omega.size() >= 2, "tabulated spectrum needs at least two nodes");
  require(s.omega.size() == s.density.size(), "tabulated omega/density length mismatch");
  for (std::size_t i = 0; i < s.omega.size(); ++i) {
    require(finite_nonneg(s.omega[i]), "tabulated omega must be finite and >= 0");
    require(finite_nonneg(s.density[i]), "tabulated density must be finite and >= 0");
    if (i > 0) require(s.omega[i] > s.omega[i - 1], "tabulated omega must be strictly increasing");
  }
}

double eval(const Tabulated& s, double omega) {
  const auto& x = s.omega;
  const auto& y = s.density;
  if (omega < x.front() || omega > x.back()) return 0.0;
  auto it = std::upper_bound(x.begin(), x.end(), omega);
  if (it == x.end()) return y.back();
  const std::size_t hi = static_cast<std::size_t>(it - x.begin());
  const std::size_t lo = hi - 1;
  if (omega == x[lo]) return y[lo];
  const double x0 = x[lo], x1 = x[hi], y0 = y[lo], y1 = y[hi];
  if (x0 <= 0.0 || y0 <= 0.0 || y1 <= 0.0) {
    const double t = (omega - x0) / (x1 - x0);
    return y0 + t * (y1 - y0);
  }
  const double t = std::log(omega / x0) / std::log(x1 / x0);
  return y0 * std::pow(y1 / y0, t);
}

// Mass of S/omega^2 above x for the tail e^{-x}(1+x) of omega*exp(-omega/wc).
double supra_tail_fraction(double x) { return std::exp(-x) * (1.0 + x); }

}  // namespace

NoiseSpectrum::NoiseSpectrum(SpectrumModel model) : model_(std::move(model)) {
  std::visit([](const auto& s) { check(s); }, model_);
}

std::string_view NoiseSpectrum::name() const noexcept {
  return std::visit(overloaded{
                        [](const OhmicSharpCutoff&) { return std::string_view("ohmic_sharp_cutoff"); },
                        [](const PowerLaw&) { return std::string_view("power_law"); },
                        [](const WhiteBand&) { return std::string_view("white_band"); },
                        [](const SupraOhmicExp&) { return std::string_view("supra_ohmic_exp"); },
                        [](const Tabulated&) { return std::string_view("tabulated"); },
                    },
                    model_);
}

double NoiseSpectrum::operator()(double omega) const {
  if (!(omega >= 0.0)) throw Error(ErrorKind::OutOfRange, "spectrum evaluated at negative omega");
  return std::visit(
      overloaded{
          [&](const OhmicSharpCutoff& s) { return omega < s.cutoff ? s.amplitude * omega : 0.0; },
          [&](const PowerLaw& s) {
            if (omega < s.omega_lo || omega > s.omega_hi || omega == 0.0) return 0.0;
            return s.amplitude * std::pow(omega, s.exponent);
          },
          [&](const WhiteBand& s) { return omega < s.omega_hi ? s.level : 0.0; },
          [&](const SupraOhmicExp& s) {
            return s.alpha * omega * omega * omega * std::exp(-omega / s.omega_c);
          },
          [&](const Tabulated& s) { return eval(s, omega); },
      },
      model_);
}

FrequencyInterval NoiseSpectrum::effective_support(double epsilon) const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "support tail fraction must lie in (0,1)");
  }
  return std::visit(
      overloaded{
          [](const OhmicSharpCutoff& s) { return FrequencyInterval{0.0, s.cutoff}; },
          [&](const PowerLaw& s) {
            if (std::isfinite(s.omega_hi)) return FrequencyInterval{s.omega_lo, s.omega_hi};
            // (omega/omega_lo)^(p-1) = epsilon
            return FrequencyInterval{s.omega_lo,
                                     s.omega_lo * std::pow(epsilon, 1.0 / (s.exponent - 1.0))};
          },
          [](const WhiteBand& s) { return FrequencyInterval{0.0, s.omega_hi}; },
          [&](const SupraOhmicExp& s) {
            // tail fraction decreases in x; widen the bracket until it straddles epsilon
            auto f = [&](double x) { return supra_tail_fraction(x) - epsilon; };
            double lo = 0.0, hi = 1.0;
            while (f(hi) > 0.0) {
              lo = hi;
              hi *= 2.0;
            }
            boost::uintmax_t iters = 200;
            auto r = boost::math::tools::toms748_solve(
                f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
            return FrequencyInterval{0.0, 0.5 * (r.first + r.second) * s.omega_c};
          },
          [](const Tabulated& s) { return FrequencyInterval{s.omega.front(), s.omega.back()}; },
      },
      model_);
}

std::vector<double> NoiseSpectrum::breakpoints() const {
  return std::visit(overloaded{
                        [](const OhmicSharpCutoff& s) { return std::vector<double>{s.cutoff}; },
                        [](const PowerLaw& s) {
                          std::vector<double> b;
                          if (s.omega_lo > 0.0) b.push_back(s.omega_lo);
                          if (std::isfinite(s.omega_hi)) b.push_back(s.omega_hi);
                          return b;
                        },
                        [](const WhiteBand& s) { return std::vector<double>{s.omega_hi}; },
                        [](const SupraOhmicExp&) { return std::vector<double>{}; },
                        [](const Tabulated& s) { return s.omega; },
                    },
                    model_);
}

bool NoiseSpectrum::has_hard_cutoff() const noexcept {
  return std::visit(overloaded{
                        [](const OhmicSharpCutoff&) { return true; },
                        [](const PowerLaw& s) { return std::isfinite(s.omega_hi); },
                        [](const WhiteBand&) { return true; },
                        [](const SupraOhmicExp&) { return false; },
                        [](const Tabulated&) { return true; },
                    },
                    model_);
}

bool NoiseSpectrum::is_zero() const noexcept {
  return std::visit(overloaded{
                        [](const OhmicSharpCutoff& s) { return s.amplitude == 0.0; },
                        [](const PowerLaw& s) { return s.amplitude == 0.0; },
                        [](const WhiteBand& s) { return s.level == 0.0; },
                        [](const SupraOhmicExp& s) { return s.alpha == 0.0; },
                        [](const Tabulated& s) {
                          return std::all_of(s.density.begin(), s.density.end(),
                                             [](double v) { return v == 0.0; });
                        },
                    },
                    model_);
}

double NoiseSpectrum::tail_mass(double lo) const {
  if (!(lo > 0.0)) throw Error(ErrorKind::OutOfRange, "tail mass needs lo > 0");
  return std::visit(
      overloaded{
          [&](const OhmicSharpCutoff& s) {
            return lo >= s.cutoff ? 0.0 : s.amplitude * std::log(s.cutoff / lo);
          },
          [&](const PowerLaw& s) {
            const double a = std::max(lo, s.omega_lo);
            if (a >= s.omega_hi) return 0.0;
            const double q = s.exponent - 1.0;
            if (std::isinf(s.omega_hi)) return s.amplitude * std::pow(a, q) / -q;
            if (q == 0.0) return s.amplitude * std::log(s.omega_hi / a);
            return s.amplitude * (std::pow(s.omega_hi, q) - std::pow(a, q)) / q;
          },
          [&](const WhiteBand& s) {
            return lo >= s.omega_hi ? 0.0 : s.level * (1.0 / lo - 1.0 / s.omega_hi);
          },
          [&](const SupraOhmicExp& s) {
            return s.alpha * s.omega_c * s.omega_c * supra_tail_fraction(lo / s.omega_c);
          },
          [&](const Tabulated& s) {
            if (lo >= s.omega.back()) return 0.0;
            throw Error(ErrorKind::InvalidArgument,
                        "tabulated tail mass only defined past the last node");
          },
      },
      model_);
}

NoiseSpectrum ohmic(double amplitude, double cutoff) {
  return NoiseSpectrum(OhmicSharpCutoff{amplitude, cutoff});
}
NoiseSpectrum white_band(double level, double omega_hi) {
  return NoiseSpectrum(WhiteBand{level, omega_hi});
}
NoiseSpectrum supra_ohmic(double alpha, double omega_c) {
  return NoiseSpectrum(SupraOhmicExp{alpha, omega_c});
}
NoiseSpectrum power_law(double amplitude, double exponent, double omega_lo, double omega_hi) {
  return NoiseSpectrum(PowerLaw{amplitude, exponent, omega_lo, omega_hi});
}
NoiseSpectrum tabulated(std::vector<double> omega, std::vector<double> density) {
  return NoiseSpectrum(Tabulated{std::move(omega), std::move(density)});
}

NoiseSpectrum scaled(const NoiseSpectrum& spec, double factor) {
  if (!finite_nonneg(factor)) throw Error(ErrorKind::OutOfRange, "scale factor must be >= 0");
  return NoiseSpectrum(std::visit(
      overloaded{
          [&](OhmicSharpCutoff s) -> SpectrumModel { s.amplitude *= factor; return s; },
          [&](PowerLaw s) -> SpectrumModel { s.amplitude *= factor; return s; },
          [&](WhiteBand s) -> SpectrumModel { s.level *= factor; return s; },
          [&](SupraOhmicExp s) -> SpectrumModel { s.alpha *= factor; return s; },
          [&](Tabulated s) -> SpectrumModel {
            for (double& d : s.density) d *= factor;
            return s;
          },
      },
      spec.model()));
}

}  // namespace ddfilter
