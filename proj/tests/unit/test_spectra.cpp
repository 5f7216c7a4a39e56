#include <doctest.h>

#include <cmath>

#include <ddfilter/error.hpp>
#include <ddfilter/spectra.hpp>

using namespace ddfilter;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

// Trapezoid in log omega, independent of the library's closed forms.
double numeric_tail(const NoiseSpectrum& s, double lo, double hi) {
  const int n = 200000;
  const double a = std::log(lo), b = std::log(hi), h = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = std::exp(a + i * h);
    sum += (i == 0 || i == n ? 0.5 : 1.0) * s(w) / w;  // S / w^2 * dw, dw = w dlog w
  }
  return sum * h;
}

}  // namespace

TEST_CASE("point values") {
  const auto o = ohmic(1.0, 1.0);
  CHECK(o(0.5) == doctest::Approx(0.5));
  CHECK(o(1.0000001) == 0.0);
  CHECK(white_band(2.0, 10.0)(5.0) == 2.0);
  const double a = 1.14e-26, wc = 3e12;
  CHECK(supra_ohmic(a, wc)(wc) == doctest::Approx(a * 27e36 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(power_law(2.0, -1.0, 1.0, 10.0)(4.0) == doctest::Approx(0.5));
  const auto t = tabulated({1.0, 10.0}, {1.0, 100.0});
  CHECK(t(std::sqrt(10.0)) == doctest::Approx(10.0));  // log-log linear
}

TEST_CASE("validation") {
  CHECK(kind_of([] { ohmic(-1.0, 1.0); }) == ErrorKind::BadConfig);
  CHECK(kind_of([] { ohmic(1.0, 0.0); }) == ErrorKind::BadConfig);
  CHECK(kind_of([] { tabulated({2.0, 1.0}, {1.0, 1.0}); }) == ErrorKind::BadConfig);
  CHECK(kind_of([] { power_law(1.0, -1.0, 0.0, 1.0); }) == ErrorKind::NonIntegrableSpectrum);
  CHECK(kind_of([] { ohmic(1.0, 1.0)(-1.0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("hard cutoffs have exact support") {
  const auto s1 = ohmic(1.0, 3.0).effective_support(1e-10);
  CHECK(s1.lo == 0.0);
  CHECK(s1.hi == 3.0);
  CHECK(white_band(1.0, 7.0).effective_support(1e-10).hi == 7.0);
  CHECK(ohmic(1.0, 3.0).has_hard_cutoff());
  CHECK_FALSE(supra_ohmic(1.0, 1.0).has_hard_cutoff());
}

TEST_CASE("soft cutoff support leaves the requested tail") {
  const auto s = supra_ohmic(1.0, 1.0);
  // S/w^2 = w exp(-w): total mass 1, tail (1 + lo) exp(-lo)
  const double total = 1.0;
  CHECK(s.tail_mass(1e-9) == doctest::Approx(total).epsilon(1e-12));
  CHECK(s.tail_mass(4.0) == doctest::Approx(5.0 * std::exp(-4.0)).epsilon(1e-12));
  for (double eps : {1e-6, 1e-10}) {
    const double hi = s.effective_support(eps).hi;
    const double tail = (1.0 + hi) * std::exp(-hi);
    CHECK(tail <= eps * total * (1 + 1e-9));
    CHECK(tail >= 0.1 * eps * total);
  }
}

TEST_CASE("tail_mass matches a numeric integral") {
  CHECK(ohmic(2.0, 5.0).tail_mass(1.0) == doctest::Approx(numeric_tail(ohmic(2.0, 5.0), 1.0, 5.0)).epsilon(1e-6));
  CHECK(supra_ohmic(1.0, 2.0).tail_mass(0.5) ==
        doctest::Approx(numeric_tail(supra_ohmic(1.0, 2.0), 0.5, 200.0)).epsilon(1e-6));
  CHECK(white_band(1.0, 4.0).tail_mass(0.5) == doctest::Approx(1.0 / 0.5 - 1.0 / 4.0));
}

TEST_CASE("zero spectra and scaling") {
  CHECK(ohmic(0.0, 1.0).is_zero());
  CHECK_FALSE(ohmic(1.0, 1.0).is_zero());
  CHECK(scaled(ohmic(1.0, 2.0), 3.0)(1.0) == doctest::Approx(3.0));
  CHECK(scaled(ohmic(1.0, 2.0), 0.0).is_zero());
}
