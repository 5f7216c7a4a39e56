#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <ddfilter/coherence.hpp>
#include <ddfilter/error.hpp>
#include <ddfilter/oracle.hpp>

using namespace ddfilter;

TEST_CASE("sampling vector") {
  const auto v = sampling_vector(make_canonical(Family::CPMG, 1), 1.0, 64);
  REQUIRE(v.y.size() == 64);
  CHECK(v.dt == doctest::Approx(1.0 / 64));
  CHECK(v.y.front() == 1.0);
  CHECK(v.y.back() == -1.0);
  const auto m = sampling_vector(make_custom({0.3}), 1.0, 100, Sampling::Midpoint);
  for (double y : m.y) CHECK((y == 1.0 || y == -1.0 || y == 0.0));
  // a flip inside a cell averages the two signs
  const auto c = sampling_vector(make_custom({0.305}), 1.0, 100);
  CHECK(c.y[30] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(sampling_vector(make_canonical(Family::UDD, 20), 1.0, 64), Error);
}

TEST_CASE("white-band autocovariance is a sinc") {
  const double s0 = 2.0, wh = 10.0;
  const std::vector<double> lags{0.0, 0.05, 0.3, 1.7};
  const auto c = autocovariance(white_band(s0, wh), lags);
  CHECK(c[0] == doctest::Approx(s0 * wh / std::numbers::pi).epsilon(1e-12));
  for (std::size_t i = 1; i < lags.size(); ++i) {
    CHECK(c[i] == doctest::Approx(s0 * std::sin(wh * lags[i]) / (std::numbers::pi * lags[i])).epsilon(1e-10));
  }
  // ohmic: (1/pi) int_0^wD w cos(w t) dw
  const double t = 0.4, wd = 3.0;
  const double ohm = (std::cos(wd * t) + wd * t * std::sin(wd * t) - 1.0) / (t * t) / std::numbers::pi;
  CHECK(autocovariance(ohmic(1.0, wd), std::vector<double>{t})[0] == doctest::Approx(ohm).epsilon(1e-10));
}

TEST_CASE("Grammian matches the frequency domain") {
  CHECK(grammian_chi(make_canonical(Family::FID, 0), white_band(1.0, 100.0), 1.0, 4096) ==
        doctest::Approx(0.5).epsilon(0.01));
  const auto spec = ohmic(1.0, 5.0);
  const auto s = make_canonical(Family::CPMG, 4);
  CHECK(grammian_chi(s, spec, 1.0, 8192) == doctest::Approx(chi(s, spec, 1.0).chi).epsilon(0.01));
}

TEST_CASE("midpoint sampling is the frequency result of the grid-quantized sequence") {
  const auto spec = ohmic(1.0, 5.0);
  const auto s = make_canonical(Family::UDD, 6);
  const std::size_t n = 4096;
  const double midpoint = grammian_chi(s, spec, 1.0, n, {}, Sampling::Midpoint);
  CHECK(midpoint == doctest::Approx(chi(quantize_timing(s, 1.0 / n), spec, 1.0).chi).epsilon(5e-3));
}

TEST_CASE("Grammian symmetries") {
  const auto spec = white_band(1.0, 8.0);
  const auto s = make_custom({0.1, 0.35, 0.7});
  const double a = grammian_chi(s, spec, 1.0, 2048);
  CHECK(grammian_chi(reflect(s), spec, 1.0, 2048) == doctest::Approx(a).epsilon(1e-9));
}

TEST_CASE("Monte Carlo") {
  const auto s = make_canonical(Family::CPMG, 2);
  const auto zero = monte_carlo_w(s, ohmic(0.0, 1.0), 1.0, 200, 512, 3);
  CHECK(zero.w == 1.0);
  CHECK(zero.stderr_w == 0.0);

  const auto fid = make_canonical(Family::FID, 0);
  const auto r = monte_carlo_w(fid, white_band(1.0, 100.0), 1.0, 10000, 2048, 11);
  CHECK(std::abs(r.w - std::exp(-chi(fid, white_band(1.0, 100.0), 1.0).chi)) <= 3 * r.stderr_w);

  // static-like noise: the echo refocuses, free evolution does not
  const auto slow = white_band(1.0, 0.01);
  const auto echo = monte_carlo_w(make_canonical(Family::CPMG, 1), scaled(slow, 1e4), 1.0, 2000, 256, 5);
  const auto free = monte_carlo_w(fid, scaled(slow, 1e4), 1.0, 2000, 256, 5);
  CHECK(echo.w > 0.999);
  CHECK(free.w < 0.99);

  const auto a = monte_carlo_w(s, ohmic(1.0, 5.0), 1.0, 500, 1024, 42);
  const auto b = monte_carlo_w(s, ohmic(1.0, 5.0), 1.0, 500, 1024, 42);
  CHECK(a.w == b.w);
  CHECK_THROWS_AS(monte_carlo_w(s, ohmic(1.0, 5.0), 1.0, 10, 1024, 42), Error);
}

TEST_CASE("halving the standard error needs four times the realizations") {
  const auto s = make_canonical(Family::UDD, 3);
  const auto spec = ohmic(4.0, 5.0);
  const auto a = monte_carlo_w(s, spec, 1.0, 1000, 1024, 9);
  const auto b = monte_carlo_w(s, spec, 1.0, 4000, 1024, 9);
  CHECK(a.stderr_w / b.stderr_w == doctest::Approx(2.0).epsilon(0.15));
}
