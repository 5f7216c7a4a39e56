#include <doctest.h>

#include <cmath>
#include <numbers>

#include <ddfilter/error.hpp>
#include <ddfilter/sequences.hpp>

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

}  // namespace

TEST_CASE("canonical families follow their closed forms") {
  CHECK(make_canonical(Family::CPMG, 1).deltas()[0] == doctest::Approx(0.5));
  const auto udd2 = make_canonical(Family::UDD, 2);
  CHECK(udd2.deltas()[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(udd2.deltas()[1] == doctest::Approx(0.75).epsilon(1e-15));
  const auto pdd2 = make_canonical(Family::PDD, 2);
  CHECK(pdd2.deltas()[0] == doctest::Approx(1.0 / 3.0));
  CHECK(pdd2.deltas()[1] == doctest::Approx(2.0 / 3.0));
  CHECK(make_canonical(Family::FID, 0).size() == 0);

  for (int n : {1, 5, 13, 40}) {
    const auto c = make_canonical(Family::CPMG, n);
    const auto u = make_canonical(Family::UDD, n);
    const auto p = make_canonical(Family::PDD, n);
    for (int j = 1; j <= n; ++j) {
      CHECK(c.deltas()[j - 1] == doctest::Approx((j - 0.5) / n).epsilon(1e-14));
      CHECK(p.deltas()[j - 1] == doctest::Approx(double(j) / (n + 1)).epsilon(1e-14));
      const double s = std::sin(std::numbers::pi * j / (2.0 * n + 2.0));
      CHECK(u.deltas()[j - 1] == doctest::Approx(s * s).epsilon(1e-14));
    }
  }
}

TEST_CASE("canonical factories reject bad orders") {
  CHECK(kind_of([] { make_canonical(Family::UDD, 0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { make_canonical(Family::Custom, 3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("custom sequences are validated") {
  CHECK(make_custom({0.25, 0.75}).size() == 2);
  CHECK(kind_of([] { make_custom({0.75, 0.25}); }) == ErrorKind::NonMonotonic);
  CHECK(kind_of([] { make_custom({0.1, 0.1000001}, 0.01); }) == ErrorKind::GapViolation);
  CHECK(kind_of([] { make_custom({0.0, 0.5}); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { make_custom({0.5, 1.0}); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { make_custom({0.5}, -0.1); }) == ErrorKind::OutOfRange);
}

TEST_CASE("quantize_timing") {
  const auto udd = make_canonical(Family::UDD, 10);
  const auto q = quantize_timing(udd, 1e-7);
  for (std::size_t j = 0; j < udd.size(); ++j) {
    const double k = q.deltas()[j] / 1e-7;
    CHECK(std::abs(k - std::round(k)) < 1e-6);
    CHECK(std::abs(q.deltas()[j] - udd.deltas()[j]) <= 5e-8 * (1 + 1e-9));
  }
  CHECK(quantize_timing(udd, 1e-300).deltas()[3] == udd.deltas()[3]);
  const auto twice = quantize_timing(q, 1e-7);
  for (std::size_t j = 0; j < q.size(); ++j) CHECK(twice.deltas()[j] == q.deltas()[j]);
  // rounding ties go away from zero
  CHECK(quantize_timing(make_custom({0.25}), 0.5).deltas()[0] == 0.5);
  CHECK(kind_of([] { quantize_timing(make_canonical(Family::UDD, 10), 0.2); }) ==
        ErrorKind::CollisionAfterRounding);
}

TEST_CASE("segments and min_gap") {
  CHECK(min_gap(make_canonical(Family::CPMG, 4)) == doctest::Approx(0.125));
  CHECK(min_gap(make_canonical(Family::PDD, 3)) == doctest::Approx(0.25));
  CHECK(min_gap(make_canonical(Family::UDD, 20)) == doctest::Approx(5.588e-3).epsilon(1e-3));
  CHECK(min_gap(make_canonical(Family::FID, 0)) == 1.0);
  const auto udd = make_canonical(Family::UDD, 7);
  const auto gaps = segments(udd);
  CHECK(gaps.size() == 8);
  const auto back = from_segments(gaps);
  for (std::size_t j = 0; j < udd.size(); ++j) {
    CHECK(back.deltas()[j] == doctest::Approx(udd.deltas()[j]).epsilon(1e-15));
  }
}

TEST_CASE("reflect is an involution and preserves symmetric families") {
  const auto s = make_custom({0.1, 0.3, 0.8});
  const auto r = reflect(s);
  CHECK(r.deltas()[0] == doctest::Approx(0.2));
  CHECK(r.deltas()[2] == doctest::Approx(0.9));
  CHECK(reflect(r).deltas()[1] == doctest::Approx(0.3));
  const auto u = make_canonical(Family::UDD, 9);
  for (std::size_t j = 0; j < u.size(); ++j) {
    CHECK(reflect(u).deltas()[j] == doctest::Approx(u.deltas()[j]).epsilon(1e-14));
  }
}

TEST_CASE("max_order") {
  CHECK(max_order(Family::PDD, 1.0, 0.1) == 9);
  CHECK(max_order(Family::CPMG, 1.0, 0.1) == 5);
  CHECK(max_order(Family::UDD, 1.0, 0.6) == 0);
  // independent scan over the closed-form first gap sin^2(pi / (2n + 2))
  int expected = 0;
  for (int n = 1; n < 1000; ++n) {
    const double s = std::sin(std::numbers::pi / (2.0 * n + 2.0));
    if (s * s * 100e-12 < 0.1e-12) break;
    expected = n;
  }
  CHECK(max_order(Family::UDD, 100e-12, 0.1e-12) == expected);
}

TEST_CASE("family names round trip") {
  for (Family f : {Family::FID, Family::CPMG, Family::PDD, Family::UDD}) {
    CHECK(parse_family(to_string(f)) == f);
  }
  CHECK(parse_family("UDD") == Family::UDD);
  CHECK(kind_of([] { parse_family("xdd"); }) == ErrorKind::InvalidArgument);
}
