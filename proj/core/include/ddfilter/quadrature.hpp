#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace ddfilter {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  /// Maximum bisection depth of any initial panel.
  int max_subdivisions = 12;
  /// Panels per filter oscillation period (2 pi in u).
  int oscillation_resolution = 8;
  /// Hard cap on the number of panels over the whole range.
  std::size_t max_panels = 4'000'000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  /// Integral of |f|; equals value for non-negative integrands.
  double l1 = 0.0;
  std::size_t panels = 0;
};

/// Integrates f over [a, b] split into panels no wider than `panel_width`,
/// with every breakpoint inside (a, b) forced onto a panel edge. Panels use
/// 21-point Gauss-Kronrod; the panel with the largest error is bisected
/// until the summed error is below max(rel_tol * L1, abs_tol) or every
/// remaining panel has reached max_subdivisions. Callers compare the
/// returned error against their own target.
QuadratureResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                                  double panel_width, std::span<const double> breakpoints,
                                  const QuadratureConfig& cfg);

}  // namespace ddfilter
