#pragma once

#include <limits>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ddfilter {

/// A * omega for omega < cutoff, zero above.
struct OhmicSharpCutoff {
  double amplitude = 1.0;
  double cutoff = 1.0;
};

/// A * omega^exponent on [omega_lo, omega_hi], zero outside. omega_hi may be
/// infinite when the exponent is below 1.
struct PowerLaw {
  double amplitude = 1.0;
  double exponent = -1.0;
  double omega_lo = 0.0;
  double omega_hi = std::numeric_limits<double>::infinity();
};

/// Flat level below omega_hi.
struct WhiteBand {
  double level = 1.0;
  double omega_hi = 1.0;
};

/// alpha * omega^3 * exp(-omega / omega_c).
struct SupraOhmicExp {
  double alpha = 1.0;
  double omega_c = 1.0;
};

/// Sampled density, interpolated linearly in log-log space between nodes
/// (linear in the first segment when it starts at omega = 0), zero outside.
struct Tabulated {
  std::vector<double> omega;
  std::vector<double> density;
};

using SpectrumModel = std::variant<OhmicSharpCutoff, PowerLaw, WhiteBand, SupraOhmicExp, Tabulated>;

struct FrequencyInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Validated, immutable dephasing-noise power spectral density.
class NoiseSpectrum {
 public:
  /// Throws BadConfig / NonIntegrableSpectrum on invalid parameters.
  explicit NoiseSpectrum(SpectrumModel model);

  const SpectrumModel& model() const noexcept { return model_; }
  std::string_view name() const noexcept;

  /// S(omega); omega < 0 is rejected.
  double operator()(double omega) const;

  /// Interval outside which the mass of S/omega^2 is below `epsilon` of
  /// the total (or the hard band edges when the model has them).
  FrequencyInterval effective_support(double epsilon) const;

  /// Frequencies where S is not smooth (cutoffs, table nodes).
  std::vector<double> breakpoints() const;

  bool has_hard_cutoff() const noexcept;
  /// True when every parameter that scales the density is zero.
  bool is_zero() const noexcept;

  /// Integral of S/omega^2 over [lo, inf). Closed form for every analytic
  /// model; tabulated spectra only support lo at or past the last node.
  /// Used to bound truncated quadrature tails.
  double tail_mass(double lo) const;

 private:
  SpectrumModel model_;
};

/// Convenience factories.
NoiseSpectrum ohmic(double amplitude, double cutoff);
NoiseSpectrum white_band(double level, double omega_hi);
NoiseSpectrum supra_ohmic(double alpha, double omega_c);
NoiseSpectrum power_law(double amplitude, double exponent, double omega_lo, double omega_hi);
NoiseSpectrum tabulated(std::vector<double> omega, std::vector<double> density);

/// Same spectrum with every density value multiplied by `factor` >= 0.
NoiseSpectrum scaled(const NoiseSpectrum& spec, double factor);

}  // namespace ddfilter
