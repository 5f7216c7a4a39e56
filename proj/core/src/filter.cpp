#include "ddfilter/filter.hpp"

#include <cmath>
#include <sstream>

#include "ddfilter/error.hpp"
#include "ddfilter/parallel.hpp"

namespace ddfilter {
namespace {

// Neumaier-compensated accumulator for one component of the phasor sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

double sin_half_squared(double u) {
  const double s = std::sin(0.5 * u);
  return s * s;
}

// |sum_k c_k (e^{i theta_k u} w_k) |^2 where w_k = cos(u r / 2) for pulse
// terms and 1 for the end term, written against e^{i0}=1 so that nothing
// of order one cancels.
double phasor_norm(std::span<const double> deltas, double u, double r) {
  const std::size_t n = deltas.size();
  CompensatedSum re, im;

  const double c = r > 0.0 ? std::cos(0.5 * u * r) : 1.0;
  const double c_minus_one = r > 0.0 ? -2.0 * sin_half_squared(0.5 * u * r) : 0.0;

  for (std::size_t j = 0; j < n; ++j) {
    const double theta = deltas[j] * u;
    const double coeff = (j % 2 == 0) ? -2.0 : 2.0;  // 2 (-1)^(j+1), j zero-based
    const double em1_re = -2.0 * sin_half_squared(theta);
    const double em1_im = std::sin(theta);
    re.add(coeff * (em1_re * c + c_minus_one));
    im.add(coeff * em1_im * c);
  }
  const double end_coeff = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^(n+1)
  re.add(end_coeff * -2.0 * sin_half_squared(u));
  im.add(end_coeff * std::sin(u));

  const double a = re.value();
  const double b = im.value();
  return a * a + b * b;
}

void require_frequency(double u) {
  if (!(u >= 0.0) || !std::isfinite(u)) {
    throw Error(ErrorKind::OutOfRange, "filter frequency must be finite and >= 0");
  }
}

}  // namespace

double filter_value(const PulseSequence& seq, double u) {
  require_frequency(u);
  if (seq.width_ratio() != 0.0) {
    throw Error(ErrorKind::InvalidArgument,
                "sequence has finite pulses; use filter_value_finite");
  }
  if (seq.size() == 0) return sin_half_squared(u);
  return phasor_norm(seq.deltas(), u, 0.0);
}

double filter_value_finite(const PulseSequence& seq, double u_prime, double r) {
  require_frequency(u_prime);
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::OutOfRange, "width ratio must be finite and >= 0");
  }
  if (r * static_cast<double>(seq.size()) >= 1.0) {
    throw Error(ErrorKind::WidthOverflow, "pulses do not fit: r * n >= 1");
  }
  if (seq.size() == 0) return sin_half_squared(u_prime);
  return phasor_norm(seq.deltas(), u_prime, r);
}

double modified_filter_value(const PulseSequence& seq, double omega, double tau) {
  if (!(omega > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "modified filter needs omega > 0");
  }
  if (!(tau > 0.0)) throw Error(ErrorKind::OutOfRange, "tau must be positive");
  const double f = seq.width_ratio() > 0.0
                       ? filter_value_finite(seq, omega * tau, seq.width_ratio())
                       : filter_value(seq, omega * tau);
  return f / (omega * omega);
}

std::string FilterVariant::tag() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind) {
    case Kind::Ideal: return "ideal";
    case Kind::FiniteWidth: out << "finite_width(" << parameter << ")"; break;
    case Kind::Quantized: out << "quantized(" << parameter << ")"; break;
  }
  return out.str();
}

PulseSequence prepare(const PulseSequence& seq, const FilterVariant& variant) {
  if (variant.kind == FilterVariant::Kind::Quantized) {
    return quantize_timing(seq, variant.parameter);
  }
  return seq;
}

double evaluate_prepared(const PulseSequence& prepared, double u, const FilterVariant& variant) {
  switch (variant.kind) {
    case FilterVariant::Kind::FiniteWidth:
      return filter_value_finite(prepared, u, variant.parameter);
    case FilterVariant::Kind::Ideal:
    case FilterVariant::Kind::Quantized:
      break;
  }
  return filter_value(prepared, u);
}

double evaluate(const PulseSequence& seq, double u, const FilterVariant& variant) {
  return evaluate_prepared(prepare(seq, variant), u, variant);
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorKind::OutOfRange, "log grid needs 0 < lo < hi");
  }
  if (count < 2) throw Error(ErrorKind::OutOfRange, "log grid needs at least two points");
  std::vector<double> grid(count);
  const double a = std::log10(lo);
  const double step = (std::log10(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::pow(10.0, a + step * static_cast<double>(i));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

FilterSamples sample_filter(const PulseSequence& seq, double u_min, double u_max,
                            int points_per_decade, const FilterVariant& variant) {
  if (points_per_decade < 1) {
    throw Error(ErrorKind::OutOfRange, "points per decade must be positive");
  }
  if (!(u_min > 0.0) || !(u_max > u_min)) {
    throw Error(ErrorKind::OutOfRange, "need 0 < u_min < u_max");
  }
  const double decades = std::log10(u_max / u_min);
  const auto count = static_cast<std::size_t>(
      std::max(2.0, std::round(decades * static_cast<double>(points_per_decade))));
  return sample_filter_on(seq, log_grid(u_min, u_max, count), variant);
}

FilterSamples sample_filter_on(const PulseSequence& seq, std::vector<double> u_grid,
                               const FilterVariant& variant) {
  for (std::size_t i = 1; i < u_grid.size(); ++i) {
    if (!(u_grid[i] > u_grid[i - 1])) {
      throw Error(ErrorKind::NonMonotonic, "frequency grid must be strictly increasing");
    }
  }
  FilterSamples out;
  out.sequence = prepare(seq, variant);
  out.variant = variant;
  out.n = seq.size();
  out.values.resize(u_grid.size());
  const PulseSequence& prepared = out.sequence;
  parallel_for(
      u_grid.size(),
      [&](std::size_t i) { out.values[i] = evaluate_prepared(prepared, u_grid[i], variant); },
      256);
  out.u = std::move(u_grid);
  return out;
}

}  // namespace ddfilter
