#include "ddfilter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ddfilter/error.hpp"

namespace ddfilter {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorKind::BadConfig, "quadrature tolerances must be positive");
  }
  if (oscillation_resolution < 4) {
    throw Error(ErrorKind::BadConfig, "oscillation resolution must be >= 4");
  }
  if (max_subdivisions < 0) throw Error(ErrorKind::BadConfig, "max_subdivisions must be >= 0");
  if (max_panels == 0) throw Error(ErrorKind::BadConfig, "max_panels must be positive");
}

namespace {

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  int depth = 0;
};


// One 21-point Kronrod panel with the embedded 10-point Gauss estimate.
void evaluate(const std::function<double(double)>& f, Panel& p) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double mid = 0.5 * (p.a + p.b);
  const double half = 0.5 * (p.b - p.a);
  const double f0 = f(mid);
  double k = f0 * wk[0];
  double g = 0.0;
  double l1 = std::abs(f0) * wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    k += (fp + fm) * wk[i];
    l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
    // Gauss nodes are the odd-indexed Kronrod nodes
    if (i % 2 == 1) g += (fp + fm) * wg[i / 2];
  }
  p.value = half * k;
  p.l1 = half * l1;
  // |K - G| overstates the Kronrod error; the second term is the rounding floor
  p.error = std::max(half * std::abs(k - g), 50.0 * std::numeric_limits<double>::epsilon() * p.l1);
}

}  // namespace

QuadratureResult integrate_panels(const std::function<double(double)>& f, double a, double b,
                                  double panel_width, std::span<const double> breakpoints,
                                  const QuadratureConfig& cfg) {
  cfg.validate();
  QuadratureResult out;
  if (!(b > a)) return out;
  if (!(panel_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "panel width must be positive");

  std::vector<double> edges{a};
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::size_t total_panels = 0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    total_panels += static_cast<std::size_t>(std::ceil((edges[s + 1] - edges[s]) / panel_width));
  }
  if (total_panels > cfg.max_panels) {
    throw Error(ErrorKind::ToleranceNotMet,
                "integration range needs " + std::to_string(total_panels) +
                    " panels, above the configured cap");
  }

  std::vector<Panel> panels;
  panels.reserve(total_panels);
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s];
    const double hi = edges[s + 1];
    const auto pieces = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil((hi - lo) / panel_width)));
    const double width = (hi - lo) / static_cast<double>(pieces);
    for (std::size_t k = 0; k < pieces; ++k) {
      Panel p;
      p.a = lo + width * static_cast<double>(k);
      p.b = (k + 1 == pieces) ? hi : lo + width * static_cast<double>(k + 1);
      evaluate(f, p);
      panels.push_back(p);
    }
  }

  // Global refinement: bisect the worst panel until the summed error meets
  // the target or every offending panel is at maximum depth.
  double error = 0.0, l1 = 0.0;
  for (const auto& p : panels) {
    error += p.error;
    l1 += p.l1;
  }
  auto worse = [&](std::size_t i, std::size_t j) {
    if (panels[i].error != panels[j].error) return panels[i].error < panels[j].error;
    return i > j;
  };
  std::vector<std::size_t> heap(panels.size());
  for (std::size_t i = 0; i < heap.size(); ++i) heap[i] = i;
  std::make_heap(heap.begin(), heap.end(), worse);
  while (!heap.empty() && error > std::max(cfg.rel_tol * l1, cfg.abs_tol)) {
    std::pop_heap(heap.begin(), heap.end(), worse);
    const std::size_t i = heap.back();
    heap.pop_back();
    if (panels[i].depth >= cfg.max_subdivisions) continue;
    Panel left = panels[i], right = panels[i];
    const double mid = 0.5 * (panels[i].a + panels[i].b);
    left.b = mid;
    right.a = mid;
    left.depth = right.depth = panels[i].depth + 1;
    evaluate(f, left);
    evaluate(f, right);
    error += left.error + right.error - panels[i].error;
    l1 += left.l1 + right.l1 - panels[i].l1;
    panels[i] = left;
    panels.push_back(right);
    heap.push_back(i);
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(panels.size() - 1);
    std::push_heap(heap.begin(), heap.end(), worse);
  }

  // sum in position order so the result does not depend on refinement order
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : panels) {
    out.value += p.value;
    out.error += p.error;
    out.l1 += p.l1;
  }
  out.panels = panels.size();
  return out;
}

}  // namespace ddfilter
