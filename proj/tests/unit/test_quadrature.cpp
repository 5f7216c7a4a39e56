#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <ddfilter/error.hpp>
#include <ddfilter/quadrature.hpp>

using namespace ddfilter;

TEST_CASE("polynomials and smooth integrands") {
  QuadratureConfig cfg;
  const auto r = integrate_panels([](double x) { return x * x * x - x; }, 0.0, 2.0, 0.5, {}, cfg);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.panels == 4);
  const auto e = integrate_panels([](double x) { return std::exp(-x); }, 0.0, 30.0, 1.0, {}, cfg);
  CHECK(e.value == doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand and the L1 norm") {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-12;
  const double pi = std::numbers::pi;
  const auto r = integrate_panels([](double x) { return std::sin(x); }, 0.0, 20 * pi + 1.0, pi / 4, {}, cfg);
  CHECK(r.value == doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-11));
  // zeros on panel edges make |sin| smooth per panel
  const auto e = integrate_panels([](double x) { return std::sin(x); }, 0.0, 20 * pi, pi / 4, {}, cfg);
  CHECK(e.l1 == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("kinks on breakpoints integrate exactly") {
  const std::vector<double> bp{0.3};
  const auto f = [](double x) { return std::abs(x - 0.3); };
  QuadratureConfig cfg;
  cfg.max_subdivisions = 0;
  const auto r = integrate_panels(f, 0.0, 1.0, 1.0, bp, cfg);
  CHECK(r.value == doctest::Approx(0.045 + 0.245).epsilon(1e-14));
}

TEST_CASE("adaptive refinement resolves a sharp feature") {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-10;
  cfg.max_subdivisions = 30;
  const auto f = [](double x) { return 1.0 / (1e-6 + x * x); };
  const auto r = integrate_panels(f, -1.0, 1.0, 2.0, {}, cfg);
  const double exact = 2.0 / 1e-3 * std::atan(1.0 / 1e-3);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-9));
  CHECK(r.error <= 1e-10 * r.l1);
}

TEST_CASE("reports the shortfall when depth runs out") {
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-14;
  cfg.max_subdivisions = 1;
  const auto r = integrate_panels([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1.0, {}, cfg);
  CHECK(r.error > 1e-14 * r.l1);
}

TEST_CASE("config validation") {
  QuadratureConfig cfg;
  cfg.rel_tol = -1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.oscillation_resolution = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
