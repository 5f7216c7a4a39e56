#include "ddfilter/sequences.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "ddfilter/error.hpp"

namespace ddfilter {
namespace {

// Relative slack on gap comparisons so that exact canonical boundaries
// (e.g. PDD gaps of exactly tau_switch) are not rejected by rounding.
constexpr double kGapSlack = 1e-12;

std::string describe(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

void validate(std::span<const double> deltas, double width_ratio) {
  if (!(width_ratio >= 0.0) || !std::isfinite(width_ratio)) {
    throw Error(ErrorKind::OutOfRange, "width ratio must be finite and non-negative");
  }
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    const double d = deltas[j];
    if (!std::isfinite(d) || d <= 0.0 || d >= 1.0) {
      throw Error(ErrorKind::OutOfRange,
                  "pulse " + std::to_string(j + 1) + " at " + describe(d) + " outside (0,1)");
    }
    if (j > 0 && !(d > deltas[j - 1])) {
      throw Error(ErrorKind::NonMonotonic,
                  "pulse " + std::to_string(j + 1) + " does not follow pulse " + std::to_string(j));
    }
  }
  if (deltas.empty()) return;
  if (width_ratio * static_cast<double>(deltas.size()) >= 1.0) {
    throw Error(ErrorKind::GapViolation, "pulses do not fit inside the sequence");
  }
  const double half = 0.5 * width_ratio;
  if (deltas.front() - half <= 0.0) {
    throw Error(ErrorKind::GapViolation, "first free segment is not positive");
  }
  if (1.0 - deltas.back() - half <= 0.0) {
    throw Error(ErrorKind::GapViolation, "last free segment is not positive");
  }
  for (std::size_t j = 1; j < deltas.size(); ++j) {
    const double gap = deltas[j] - deltas[j - 1];
    if (gap - width_ratio <= 0.0) {
      throw Error(ErrorKind::GapViolation, "gap " + describe(gap) + " between pulses " +
                                               std::to_string(j) + " and " + std::to_string(j + 1) +
                                               " does not exceed the pulse width " +
                                               describe(width_ratio));
    }
  }
}

std::vector<double> canonical_deltas(Family family, int n) {
  std::vector<double> d(static_cast<std::size_t>(n));
  const double nn = n;
  for (int j = 1; j <= n; ++j) {
    double value = 0.0;
    switch (family) {
      case Family::CPMG: value = (j - 0.5) / nn; break;
      case Family::PDD: value = j / (nn + 1.0); break;
      case Family::UDD: {
        const double s = std::sin(std::numbers::pi * j / (2.0 * nn + 2.0));
        value = s * s;
        break;
      }
      default: throw Error(ErrorKind::InvalidArgument, "not a generated family");
    }
    d[static_cast<std::size_t>(j - 1)] = value;
  }
  return d;
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::FID: return "fid";
    case Family::CPMG: return "cpmg";
    case Family::PDD: return "pdd";
    case Family::UDD: return "udd";
    case Family::Custom: return "custom";
  }
  return "custom";
}

Family parse_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "fid") return Family::FID;
  if (lower == "cpmg") return Family::CPMG;
  if (lower == "pdd") return Family::PDD;
  if (lower == "udd") return Family::UDD;
  if (lower == "custom") return Family::Custom;
  throw Error(ErrorKind::InvalidArgument, "unknown sequence family '" + std::string(name) + "'");
}

PulseSequence::PulseSequence(std::vector<double> deltas, double width_ratio, Family family,
                             std::string label)
    : deltas_(std::move(deltas)),
      width_ratio_(width_ratio),
      family_(family),
      label_(std::move(label)) {
  validate(deltas_, width_ratio_);
}

PulseSequence make_canonical(Family family, int n) {
  if (family == Family::Custom) {
    throw Error(ErrorKind::InvalidArgument, "custom sequences need explicit pulse positions");
  }
  if (family == Family::FID) {
    if (n != 0) throw Error(ErrorKind::InvalidArgument, "FID has no pulses");
    return PulseSequence({}, 0.0, Family::FID, "fid");
  }
  if (n < 1) {
    throw Error(ErrorKind::InvalidArgument,
                std::string(to_string(family)) + " needs at least one pulse");
  }
  return PulseSequence(canonical_deltas(family, n), 0.0, family,
                       std::string(to_string(family)) + ":" + std::to_string(n));
}

PulseSequence make_custom(std::vector<double> deltas, double width_ratio, std::string label) {
  const Family family = deltas.empty() ? Family::FID : Family::Custom;
  return PulseSequence(std::move(deltas), width_ratio, family, std::move(label));
}

PulseSequence with_family(const PulseSequence& seq, Family family, std::string label) {
  return PulseSequence(std::vector<double>(seq.deltas().begin(), seq.deltas().end()),
                       seq.width_ratio(), family, std::move(label));
}

PulseSequence with_width(const PulseSequence& seq, double width_ratio) {
  auto copy = make_custom(std::vector<double>(seq.deltas().begin(), seq.deltas().end()),
                          width_ratio, seq.label());
  return with_family(copy, seq.family(), seq.label());
}

PulseSequence quantize_timing(const PulseSequence& seq, double precision) {
  if (!(precision > 0.0 && precision < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "timing precision must lie in (0,1)");
  }
  std::vector<double> rounded;
  rounded.reserve(seq.size());
  for (double d : seq.deltas()) {
    if (precision <= d * std::numeric_limits<double>::epsilon()) {
      rounded.push_back(d);
      continue;
    }
    // std::round is half-away-from-zero.
    rounded.push_back(std::round(d / precision) * precision);
  }
  for (std::size_t j = 1; j < rounded.size(); ++j) {
    if (!(rounded[j] > rounded[j - 1])) {
      throw Error(ErrorKind::CollisionAfterRounding,
                  "pulses " + std::to_string(j) + " and " + std::to_string(j + 1) +
                      " round to the same grid point");
    }
  }
  std::ostringstream label;
  label << seq.label() << "@" << precision;
  auto out = make_custom(std::move(rounded), seq.width_ratio(), label.str());
  return with_family(out, seq.family(), label.str());
}

std::vector<double> segments(const PulseSequence& seq) {
  std::vector<double> gaps;
  gaps.reserve(seq.size() + 1);
  double prev = 0.0;
  for (double d : seq.deltas()) {
    gaps.push_back(d - prev);
    prev = d;
  }
  gaps.push_back(1.0 - prev);
  return gaps;
}

PulseSequence from_segments(std::span<const double> gaps, double width_ratio, std::string label) {
  if (gaps.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one segment");
  const double total = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorKind::OutOfRange, "segments must have positive total");
  std::vector<double> deltas;
  deltas.reserve(gaps.size() - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
    if (!(gaps[i] > 0.0)) throw Error(ErrorKind::OutOfRange, "segments must be positive");
    acc += gaps[i];
    deltas.push_back(acc / total);
  }
  if (!(gaps.back() > 0.0)) throw Error(ErrorKind::OutOfRange, "segments must be positive");
  return make_custom(std::move(deltas), width_ratio, std::move(label));
}

double min_gap(const PulseSequence& seq) {
  const auto gaps = segments(seq);
  return *std::min_element(gaps.begin(), gaps.end());
}

PulseSequence reflect(const PulseSequence& seq) {
  std::vector<double> mirrored(seq.deltas().rbegin(), seq.deltas().rend());
  for (double& d : mirrored) d = 1.0 - d;
  auto out = make_custom(std::move(mirrored), seq.width_ratio(), seq.label() + ":reflected");
  return with_family(out, seq.family(), out.label());
}

int max_order(Family family, double tau, double tau_switch) {
  if (family == Family::FID || family == Family::Custom) {
    throw Error(ErrorKind::InvalidArgument, "max_order needs a generated pulse family");
  }
  if (!(tau_switch > 0.0) || !(tau > tau_switch)) {
    throw Error(ErrorKind::OutOfRange, "need tau > tau_switch > 0");
  }
  // Any n-pulse sequence has a segment no longer than 1/(n+1).
  const int bound = static_cast<int>(std::floor(tau / tau_switch * (1.0 + kGapSlack)));
  int best = 0;
  for (int n = 1; n <= bound; ++n) {
    if (min_gap(make_canonical(family, n)) * tau >= tau_switch * (1.0 - kGapSlack)) {
      best = n;
    } else {
      break;
    }
  }
  return best;
}

}  // namespace ddfilter
