#include "ddfilter/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "ddfilter/error.hpp"

namespace ddfilter::io {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void dump_into(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        dump_into(out, e);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += json(key).dump();
        out += ':';
        dump_into(out, value);
      }
      out += '}';
      break;
    }
    default:
      out += j.dump();
  }
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::BadConfig, std::string("missing parameter: ") + key);
  const auto& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorKind::BadConfig, std::string("not a number: ") + key);
  return v.get<double>();
}

void allow_keys(const json& j, std::initializer_list<std::string_view> keys) {
  const std::set<std::string_view> allowed(keys);
  for (const auto& [key, value] : j.items()) {
    if (key != "variant" && !allowed.contains(key)) {
      throw Error(ErrorKind::BadConfig, "unknown spectrum parameter: " + key);
    }
  }
}

std::vector<double> numbers(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorKind::BadConfig, std::string("expected an array: ") + key);
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw Error(ErrorKind::BadConfig, std::string("not a number in ") + key);
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const json& j) {
  std::string out;
  dump_into(out, j);
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::BadConfig, "cannot write " + tmp.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorKind::BadConfig, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::BadConfig, "cannot move output into place: " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::BadConfig, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

NoiseSpectrum read_tabulated_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::BadConfig, "empty spectrum table");
  std::vector<double> omega, density;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::BadConfig, "expected two columns at line " + std::to_string(lineno));
    }
    try {
      std::size_t used = 0;
      omega.push_back(std::stod(line.substr(0, comma)));
      const std::string rest = line.substr(comma + 1);
      density.push_back(std::stod(rest, &used));
      if (rest.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::BadConfig, "malformed number at line " + std::to_string(lineno));
    }
  }
  return tabulated(std::move(omega), std::move(density));
}

NoiseSpectrum spectrum_from_json(const json& j, const std::filesystem::path& base) {
  if (!j.is_object() || !j.contains("variant") || !j.at("variant").is_string()) {
    throw Error(ErrorKind::BadConfig, "spectrum config needs a string \"variant\"");
  }
  const auto variant = j.at("variant").get<std::string>();
  if (variant == "ohmic_sharp_cutoff" || variant == "ohmic") {
    allow_keys(j, {"amplitude", "cutoff"});
    return ohmic(number(j, "amplitude"), number(j, "cutoff"));
  }
  if (variant == "white_band") {
    allow_keys(j, {"level", "omega_hi"});
    return white_band(number(j, "level"), number(j, "omega_hi"));
  }
  if (variant == "supra_ohmic_exp" || variant == "supra_ohmic") {
    allow_keys(j, {"alpha", "omega_c"});
    return supra_ohmic(number(j, "alpha"), number(j, "omega_c"));
  }
  if (variant == "power_law") {
    allow_keys(j, {"amplitude", "exponent", "omega_lo", "omega_hi"});
    const double hi = j.contains("omega_hi") && !j.at("omega_hi").is_null()
                          ? number(j, "omega_hi")
                          : std::numeric_limits<double>::infinity();
    const double lo = j.contains("omega_lo") ? number(j, "omega_lo") : 0.0;
    return power_law(number(j, "amplitude"), number(j, "exponent"), lo, hi);
  }
  if (variant == "tabulated") {
    allow_keys(j, {"omega", "density", "csv"});
    if (j.contains("csv")) {
      if (!j.at("csv").is_string()) throw Error(ErrorKind::BadConfig, "\"csv\" must be a path");
      std::filesystem::path p = j.at("csv").get<std::string>();
      if (p.is_relative() && !base.empty()) p = base / p;
      return read_tabulated_csv(p);
    }
    return tabulated(numbers(j, "omega"), numbers(j, "density"));
  }
  throw Error(ErrorKind::BadConfig, "unknown spectrum variant: " + variant);
}

NoiseSpectrum load_spectrum(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::BadConfig, path.string() + ": " + e.what());
  }
  return spectrum_from_json(j, path.parent_path());
}

json to_json(const NoiseSpectrum& spec) {
  json j;
  j["variant"] = std::string(spec.name());
  std::visit(overloaded{
                 [&](const OhmicSharpCutoff& s) {
                   j["amplitude"] = s.amplitude;
                   j["cutoff"] = s.cutoff;
                 },
                 [&](const PowerLaw& s) {
                   j["amplitude"] = s.amplitude;
                   j["exponent"] = s.exponent;
                   j["omega_lo"] = s.omega_lo;
                   if (std::isfinite(s.omega_hi)) j["omega_hi"] = s.omega_hi;
                 },
                 [&](const WhiteBand& s) {
                   j["level"] = s.level;
                   j["omega_hi"] = s.omega_hi;
                 },
                 [&](const SupraOhmicExp& s) {
                   j["alpha"] = s.alpha;
                   j["omega_c"] = s.omega_c;
                 },
                 [&](const Tabulated& s) {
                   j["omega"] = s.omega;
                   j["density"] = s.density;
                 },
             },
             spec.model());
  return j;
}

NoiseSpectrum rescale_frequency(const NoiseSpectrum& spec, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorKind::BadConfig, "frequency scale must be positive");
  SpectrumModel m = spec.model();
  std::visit(overloaded{
                 [&](OhmicSharpCutoff& s) { s.cutoff *= factor; },
                 [&](PowerLaw& s) {
                   s.omega_lo *= factor;
                   s.omega_hi *= factor;
                 },
                 [&](WhiteBand& s) { s.omega_hi *= factor; },
                 [&](SupraOhmicExp& s) { s.omega_c *= factor; },
                 [&](Tabulated& s) {
                   for (double& w : s.omega) w *= factor;
                 },
             },
             m);
  return NoiseSpectrum(std::move(m));
}

json to_json(const PulseSequence& seq) {
  json j;
  j["family"] = std::string(to_string(seq.family()));
  j["n"] = seq.size();
  j["deltas"] = std::vector<double>(seq.deltas().begin(), seq.deltas().end());
  j["width_ratio"] = seq.width_ratio();
  j["label"] = seq.label();
  return j;
}

PulseSequence sequence_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::BadConfig, "sequence must be a JSON object");
  try {
    const Family family = parse_family(j.value("family", std::string("custom")));
    const double width = j.value("width_ratio", 0.0);
    const std::string label = j.value("label", std::string());
    if (j.contains("deltas")) {
      auto deltas = j.at("deltas").get<std::vector<double>>();
      if (j.contains("n") && j.at("n").get<std::size_t>() != deltas.size()) {
        throw Error(ErrorKind::BadConfig, "\"n\" disagrees with the number of deltas");
      }
      auto seq = make_custom(std::move(deltas), width, label.empty() ? "custom" : label);
      if (family != Family::Custom) {
        seq = with_family(seq, family, label.empty() ? std::string(to_string(family)) + ":" +
                                                           std::to_string(seq.size())
                                                     : label);
      }
      return seq;
    }
    if (!j.contains("n")) throw Error(ErrorKind::BadConfig, "sequence needs \"deltas\" or \"n\"");
    auto seq = make_canonical(family, j.at("n").get<int>());
    return width > 0.0 ? with_width(seq, width) : seq;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadConfig, std::string("malformed sequence: ") + e.what());
  }
}

PulseSequence parse_sequence(std::string_view token) {
  if (token.empty()) throw Error(ErrorKind::BadConfig, "empty sequence");
  if (token.front() == '@') {
    const std::filesystem::path p(token.substr(1));
    try {
      return sequence_from_json(json::parse(read_file(p)));
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::BadConfig, p.string() + ": " + e.what());
    }
  }
  const auto colon = token.find(':');
  const Family family = parse_family(token.substr(0, colon));
  if (colon == std::string_view::npos) {
    if (family != Family::FID) throw Error(ErrorKind::BadConfig, "expected family:n");
    return make_canonical(Family::FID, 0);
  }
  const std::string digits(token.substr(colon + 1));
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(digits, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != digits.size()) {
    throw Error(ErrorKind::BadConfig, "bad pulse count in " + std::string(token));
  }
  return make_canonical(family, n);
}

std::string filter_csv(const FilterSamples& samples) {
  std::string out = "u,F,variant,n\n";
  const std::string tag = samples.variant.tag();
  const std::string n = std::to_string(samples.n);
  for (std::size_t i = 0; i < samples.u.size(); ++i) {
    out += format_double(samples.u[i]) + ',' + format_double(samples.values[i]) + ',' + tag + ',' +
           n + '\n';
  }
  return out;
}

std::string curve_csv(const CoherenceCurve& curve) {
  std::string out = "tau,chi,W,n,family\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& s = curve.sequences[i];
    out += format_double(curve.tau[i]) + ',' + format_double(curve.chi[i]) + ',' +
           format_double(curve.w[i]) + ',' + std::to_string(s.size()) + ',' +
           std::string(to_string(s.family())) + '\n';
  }
  return out;
}

std::string_view to_string(RatioFlag flag) noexcept {
  switch (flag) {
    case RatioFlag::Below: return "lt";
    case RatioFlag::Equal: return "eq";
    case RatioFlag::Above: return "gt";
    case RatioFlag::Masked: return "masked";
  }
  return "masked";
}

std::string ratio_csv(const RatioSamples& ratio) {
  std::string out = "u,ratio,flag\n";
  for (std::size_t i = 0; i < ratio.u.size(); ++i) {
    out += format_double(ratio.u[i]) + ',' + format_double(ratio.ratio[i]) + ',' +
           std::string(to_string(ratio.flag[i])) + '\n';
  }
  return out;
}

json to_json(const ChiResult& r) {
  return {{"chi", r.chi},
          {"error", r.error},
          {"tail_bound", r.tail_bound},
          {"u_upper", r.u_upper},
          {"panels", r.panels}};
}

json to_json(const CoherenceCurve& curve) {
  json points = json::array();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    points.push_back({{"tau", curve.tau[i]},
                      {"chi", curve.chi[i]},
                      {"W", curve.w[i]},
                      {"error", curve.error[i]},
                      {"panels", curve.panels[i]},
                      {"sequence", to_json(curve.sequences[i])}});
  }
  return {{"points", points}};
}

json to_json(const FilterMetrics& m) {
  json j{{"u_f1", m.u_f1},
         {"rolloff_db_per_octave", m.rolloff.db_per_octave},
         {"fit_u_lo", m.rolloff.u_lo},
         {"fit_u_hi", m.rolloff.u_hi},
         {"fit_points", m.rolloff.points}};
  if (m.passband) {
    j["passband"] = {{"mean", m.passband->mean},
                     {"max", m.passband->max},
                     {"min", m.passband->min},
                     {"ripple_db", m.passband->ripple_db},
                     {"deviation", m.passband->deviation},
                     {"span_lo", m.passband->span_lo},
                     {"span_hi", m.passband->span_hi}};
  } else {
    j["passband"] = nullptr;
  }
  return j;
}

json to_json(const BandpassProfile& p) {
  return {{"has_peak", p.has_peak},
          {"peak_omega", p.peak_omega},
          {"peak_value", p.peak_value},
          {"bandwidth", p.bandwidth},
          {"half_lo", p.half_lo},
          {"half_hi", p.half_hi},
          {"lobe_lo", p.lobe_lo},
          {"lobe_hi", p.lobe_hi},
          {"out_of_band_rejection_db", p.out_of_band_rejection_db},
          {"plateau_value", p.plateau_value}};
}

json to_json(const OptimizationResult& r) {
  json baselines = json::object();
  for (const auto& b : r.baselines) baselines[b.label] = b.value;
  const auto& d = r.diagnostics;
  return {{"sequence", to_json(r.sequence)},
          {"objective", r.objective},
          {"baselines", baselines},
          {"diagnostics",
           {{"iterations", d.iterations},
            {"evaluations", d.evaluations},
            {"restarts", d.restarts},
            {"converged", d.converged},
            {"degenerate", d.degenerate},
            {"constraint_slack", d.constraint_slack},
            {"winning_start", d.winning_start}}}};
}

json to_json(const BaddResult& r) {
  json per_n = json::array();
  for (const auto& e : r.per_n) {
    per_n.push_back({{"n", e.n}, {"chi", e.chi}, {"min_gap", e.min_gap}, {"converged", e.converged}});
  }
  return {{"best", to_json(r.best)},
          {"per_n", per_n},
          {"udd_max_order", r.udd_max_order},
          {"udd_best_n", r.udd_best_n},
          {"udd_best_chi", r.udd_best_chi}};
}

json to_json(const OracleReport& r) {
  return {{"chi_freq", r.chi_freq}, {"chi_grammian", r.chi_grammian}, {"rel_diff", r.rel_diff},
          {"N", r.steps},           {"w_mc", r.w_mc},                 {"stderr", r.stderr_w},
          {"M", r.realizations},    {"seed", r.seed}};
}

}  // namespace ddfilter::io
