#include "cli.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include <ddfilter/coherence.hpp>
#include <ddfilter/error.hpp>
#include <ddfilter/filter.hpp>
#include <ddfilter/io.hpp>
#include <ddfilter/metrics.hpp>
#include <ddfilter/optimize.hpp>
#include <ddfilter/oracle.hpp>
#include <ddfilter/sequences.hpp>

namespace dd {
namespace {

using namespace ddfilter;
using io::json;

constexpr double kPico = 1e-12;

struct Artifact {
  std::filesystem::path path;
  std::string content;
};

// Nothing touches disk until every artifact has been computed; a failed
// write removes the ones already in place.
void commit(const std::vector<Artifact>& artifacts) {
  std::vector<std::filesystem::path> written;
  try {
    for (const auto& a : artifacts) {
      if (a.path.has_parent_path()) std::filesystem::create_directories(a.path.parent_path());
      io::write_atomic(a.path, a.content);
      written.push_back(a.path);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
}

// A malformed sequence token is a usage problem, not a computation failure.
PulseSequence parse_token(const std::string& token) {
  try {
    return io::parse_sequence(token);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw UsageError(e.what());
    throw;
  }
}

PulseSequence resolve_sequence(const RunPlan& p) {
  if (!p.seq.empty()) return parse_token(p.seq);
  if (p.family.empty()) throw UsageError("a sequence is required (--seq, or --family with --n)");
  const Family f = [&] {
    try {
      return parse_family(p.family);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  if (f == Family::FID) return make_canonical(Family::FID, 0);
  if (p.n < 0) throw UsageError("--n is required with --family");
  return make_canonical(f, p.n);
}

FilterVariant resolve_variant(const RunPlan& p) {
  if (p.variant == "ideal") return FilterVariant::ideal();
  if (p.variant == "finite") return FilterVariant::finite_width(p.width_ratio);
  if (p.variant == "quantized") return FilterVariant::quantized(p.precision);
  throw UsageError("unknown --variant " + p.variant);
}

NoiseSpectrum resolve_spectrum(const RunPlan& p) {
  if (p.spectrum.empty()) throw UsageError("--spectrum is required");
  auto spec = io::load_spectrum(p.spectrum);
  return p.omega_per_ps ? io::rescale_frequency(spec, 1.0 / kPico) : spec;
}

double resolve_tau(const RunPlan& p) {
  if (!p.tau) throw UsageError("--tau (or --tau-ps) is required");
  return *p.tau;
}

OptimizationConfig resolve_optimizer(const RunPlan& p) {
  OptimizationConfig cfg;
  cfg.restarts = p.restarts;
  cfg.max_iterations = p.max_iterations;
  cfg.seed = p.seed;
  return cfg;
}

std::filesystem::path in_dir(const RunPlan& p, const std::string& name) { return p.out_dir / name; }

json artifact_list(const std::vector<Artifact>& artifacts) {
  json a = json::array();
  for (const auto& x : artifacts) a.push_back(x.path.string());
  return a;
}

std::string samples_json(const FilterSamples& s) {
  return io::dump({{"u", s.u},
                   {"F", s.values},
                   {"variant", s.variant.tag()},
                   {"n", s.n},
                   {"sequence", io::to_json(s.sequence)}});
}

json cmd_filter(const RunPlan& p, std::vector<Artifact>& out) {
  const auto seq = resolve_sequence(p);
  const auto variant = resolve_variant(p);
  const auto samples = sample_filter(seq, p.u_min, p.u_max, p.ppd, variant);
  if (!p.out.empty()) {
    out.push_back({p.out, p.format == "json" ? samples_json(samples) : io::filter_csv(samples)});
  }
  return {{"sequence", seq.label()}, {"variant", variant.tag()}, {"points", samples.u.size()}};
}

std::vector<double> tau_grid(const RunPlan& p) {
  if (p.tau_min && p.tau_max) {
    if (p.tau_count < 1) throw UsageError("--tau-count must be >= 1");
    if (p.tau_count == 1) return {*p.tau_min};
    return log_grid(*p.tau_min, *p.tau_max, static_cast<std::size_t>(p.tau_count));
  }
  if (p.tau) return {*p.tau};
  throw UsageError("coherence needs --tau or --tau-min/--tau-max");
}

json cmd_coherence(const RunPlan& p, std::vector<Artifact>& out) {
  const auto spec = resolve_spectrum(p);
  const auto grid = tau_grid(p);
  SequenceSource source;
  if (p.source == "fixed") {
    source = fixed_sequence(resolve_sequence(p));
  } else if (p.source == "lodd") {
    if (p.n < 1) throw UsageError("--source lodd needs --n >= 1");
    const auto cfg = resolve_optimizer(p);
    source = [&spec, cfg, n = p.n](double tau) { return optimize_lodd(spec, n, tau, cfg).sequence; };
  } else {
    throw UsageError("unknown --source " + p.source);
  }
  const auto curve = coherence_curve(source, spec, grid);
  if (!p.out.empty()) {
    out.push_back({p.out, p.format == "json" ? io::dump(io::to_json(curve)) : io::curve_csv(curve)});
  }
  return {{"points", curve.size()}, {"chi_last", curve.chi.back()}, {"W_last", curve.w.back()}};
}

json cmd_metrics(const RunPlan& p, std::vector<Artifact>& out) {
  const auto seq = resolve_sequence(p);
  const auto samples = sample_filter(seq, p.u_min, p.u_max, p.ppd, resolve_variant(p));
  json report = io::to_json(compute_metrics(samples));
  // modified filter at tau = 1 on a linear frequency grid
  const auto omega = [&] {
    std::vector<double> w(4000);
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = p.bandpass_omega_max * static_cast<double>(i + 1) / static_cast<double>(w.size());
    }
    return w;
  }();
  report["bandpass"] = io::to_json(bandpass_profile(seq, 1.0, omega));
  report["sequence"] = io::to_json(seq);
  if (!p.out.empty()) out.push_back({p.out, io::dump(report)});
  return {{"sequence", seq.label()},
          {"u_f1", report["u_f1"]},
          {"rolloff_db_per_octave", report["rolloff_db_per_octave"]}};
}

json cmd_compare(const RunPlan& p, std::vector<Artifact>& out) {
  if (p.seq_a.empty() || p.seq_b.empty()) throw UsageError("compare needs --a and --b");
  const auto a = parse_token(p.seq_a);
  const auto b = parse_token(p.seq_b);
  const auto samples = sample_filter(a, p.u_min, p.u_max, p.ppd);
  const auto ratio = filter_ratio(a, b, samples.u, resolve_variant(p));
  if (!p.out.empty()) out.push_back({p.out, io::ratio_csv(ratio)});
  json bands = json::array();
  for (const auto& band : contiguous_bands(ratio, RatioFlag::Above)) {
    bands.push_back({band.lo, band.hi});
  }
  double min_below_1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ratio.u.size(); ++i) {
    if (ratio.u[i] < 1.0 && ratio.flag[i] != RatioFlag::Masked) {
      min_below_1 = std::min(min_below_1, ratio.ratio[i]);
    }
  }
  return {{"a", a.label()}, {"b", b.label()}, {"min_ratio_below_u1", min_below_1},
          {"bands_a_above_b", bands}};
}

json cmd_optimize(const RunPlan& p, std::vector<Artifact>& out) {
  const auto cfg = resolve_optimizer(p);
  json result;
  if (p.subcommand == "lodd") {
    if (p.n < 1) throw UsageError("--n >= 1 is required");
    result = io::to_json(optimize_lodd(resolve_spectrum(p), p.n, resolve_tau(p), cfg));
  } else if (p.subcommand == "ofdd") {
    if (p.n < 1) throw UsageError("--n >= 1 is required");
    result = io::to_json(optimize_ofdd(p.n, p.u_cut, cfg));
  } else {
    if (!p.tau_switch) throw UsageError("--tau-switch (or --tau-switch-ps) is required");
    result = io::to_json(
        optimize_badd(resolve_spectrum(p), resolve_tau(p), *p.tau_switch, p.n_max, cfg));
  }
  if (!p.out.empty()) out.push_back({p.out, io::dump(result)});
  const json& best = p.subcommand == "badd" ? result["best"] : result;
  return {{"mode", p.subcommand},
          {"objective", best["objective"]},
          {"n", best["sequence"]["n"]},
          {"converged", best["diagnostics"]["converged"]}};
}

json cmd_oracle(const RunPlan& p, std::vector<Artifact>& out) {
  const auto rep = oracle_report(resolve_sequence(p), resolve_spectrum(p), resolve_tau(p),
                                 p.n_steps, p.mc, p.seed);
  const json j = io::to_json(rep);
  if (!p.out.empty()) out.push_back({p.out, io::dump(j)});
  return j;
}

void figure_filters(const RunPlan& p, std::vector<Artifact>& out,
                    const std::vector<std::pair<Family, int>>& which, const std::string& prefix,
                    const FilterVariant& variant = {}, const std::string& suffix = "") {
  for (const auto& [fam, n] : which) {
    const auto seq = make_canonical(fam, n);
    const auto s = sample_filter(seq, p.u_min, p.u_max, p.ppd, variant);
    std::string name = prefix + "_" + std::string(to_string(fam)) + "_" + std::to_string(n) + suffix;
    out.push_back({in_dir(p, name + ".csv"), io::filter_csv(s)});
  }
}

json cmd_figures(const RunPlan& p, std::vector<Artifact>& out) {
  const std::vector<Family> families{Family::CPMG, Family::PDD, Family::UDD};
  if (p.which == "ff1") {
    // filter grids n = 3..10 plus the parity panel n = 2..6
    std::vector<std::pair<Family, int>> grid;
    for (Family f : families) {
      for (int n = 2; n <= 10; ++n) grid.emplace_back(f, n);
    }
    grid.emplace_back(Family::FID, 0);
    figure_filters(p, out, grid, "ff1");
  } else if (p.which == "ff2") {
    const auto a = make_canonical(Family::UDD, 10);
    const auto b = make_canonical(Family::CPMG, 10);
    figure_filters(p, out, {{Family::UDD, 10}, {Family::CPMG, 10}}, "ff2");
    const auto u = log_grid(p.u_min, p.u_max,
                            static_cast<std::size_t>(std::round(std::log10(p.u_max / p.u_min) * p.ppd)));
    out.push_back({in_dir(p, "ff2_ratio_udd_cpmg_10.csv"), io::ratio_csv(filter_ratio(a, b, u))});
  } else if (p.which == "ff3") {
    std::string csv = "omega,G,family,n\n";
    std::vector<std::pair<Family, int>> grid{{Family::FID, 0}};
    for (Family f : families) {
      for (int n = 2; n <= 10; ++n) grid.emplace_back(f, n);
    }
    json profiles = json::object();
    std::vector<double> omega(4000);
    for (std::size_t i = 0; i < omega.size(); ++i) {
      omega[i] = p.bandpass_omega_max * static_cast<double>(i + 1) / static_cast<double>(omega.size());
    }
    for (const auto& [fam, n] : grid) {
      const auto seq = make_canonical(fam, n);
      for (double w : omega) {
        csv += io::format_double(w) + ',' + io::format_double(modified_filter_value(seq, w, 1.0)) +
               ',' + std::string(to_string(fam)) + ',' + std::to_string(n) + '\n';
      }
      profiles[seq.label()] = io::to_json(bandpass_profile(seq, 1.0, omega));
    }
    out.push_back({in_dir(p, "ff3_modified_filter.csv"), csv});
    out.push_back({in_dir(p, "ff3_bandpass.json"), io::dump(profiles)});
  } else if (p.which == "ff4") {
    for (double r : {0.0, 1e-4, 1e-3, 1e-2}) {
      const auto v = r > 0.0 ? FilterVariant::finite_width(r) : FilterVariant::ideal();
      figure_filters(p, out, {{Family::UDD, 7}, {Family::CPMG, 8}}, "ff4", v,
                     "_r" + io::format_double(r));
    }
  } else if (p.which == "ff5") {
    figure_filters(p, out, {{Family::UDD, 10}, {Family::CPMG, 10}}, "ff5");
    for (double q : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}) {
      figure_filters(p, out, {{Family::UDD, 10}, {Family::CPMG, 10}}, "ff5",
                     FilterVariant::quantized(q), "_p" + io::format_double(q));
    }
  } else if (p.which == "lodd") {
    // n = 6 LODD suite for S = omega below omega_D = 1, and OFDD at u_max = tau
    const auto spec = ohmic(1.0, 1.0);
    const auto cfg = resolve_optimizer(p);
    const int n = p.n > 0 ? p.n : 6;
    const std::vector<double> taus{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<OptimizationResult> lodd(taus.size()), ofdd(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
      lodd[i] = optimize_lodd(spec, n, taus[i], cfg);
      ofdd[i] = optimize_ofdd(n, taus[i], cfg);
    }
    std::string csv = "tau,kind,j,delta\n";
    json suite = json::array();
    for (std::size_t i = 0; i < taus.size(); ++i) {
      for (const auto& [kind, r] : {std::pair{"lodd", &lodd[i]}, std::pair{"ofdd", &ofdd[i]}}) {
        const auto d = r->sequence.deltas();
        for (std::size_t j = 0; j < d.size(); ++j) {
          csv += io::format_double(taus[i]) + ',' + kind + ',' + std::to_string(j + 1) + ',' +
                 io::format_double(d[j]) + '\n';
        }
      }
      suite.push_back({{"tau", taus[i]}, {"lodd", io::to_json(lodd[i])}, {"ofdd", io::to_json(ofdd[i])}});
    }
    out.push_back({in_dir(p, "lodd_ofdd_timings.csv"), csv});
    out.push_back({in_dir(p, "lodd_ofdd_suite.json"), io::dump(suite)});
  } else {
    throw UsageError("unknown figure '" + p.which + "' (ff1, ff2, ff3, ff4, ff5, lodd)");
  }
  return {{"which", p.which}, {"files", out.size()}};
}

int exit_code(ErrorKind kind) { return kind == ErrorKind::BadConfig ? 2 : 1; }

}  // namespace

RunPlan parse_args(int argc, const char* const* argv) {
  RunPlan plan;
  CLI::App app{"Dynamical-decoupling filter design toolkit", "dd"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  std::optional<double> tau_ps, tau_switch_ps;
  auto add_seq = [&](CLI::App* c) {
    c->add_option("--seq", plan.seq, "Sequence: family:n, fid, or @file.json");
    c->add_option("--family", plan.family, "Sequence family (fid, cpmg, pdd, udd)");
    c->add_option("--n", plan.n, "Number of pulses");
  };
  auto add_grid = [&](CLI::App* c) {
    c->add_option("--u-min", plan.u_min, "Lowest u = omega tau");
    c->add_option("--u-max", plan.u_max, "Highest u");
    c->add_option("--ppd", plan.ppd, "Grid points per decade");
    c->add_option("--variant", plan.variant, "ideal, finite or quantized")
        ->check(CLI::IsMember({"ideal", "finite", "quantized"}));
    c->add_option("--width", plan.width_ratio, "Pulse width ratio for --variant finite");
    c->add_option("--precision", plan.precision, "Timing precision for --variant quantized");
  };
  auto add_spectrum = [&](CLI::App* c) {
    c->add_option("--spectrum", plan.spectrum, "Spectrum config (JSON)");
    c->add_flag("--omega-rad-per-ps", plan.omega_per_ps,
                "Spectrum frequencies are in rad/ps (converted to rad/s)");
  };
  auto add_tau = [&](CLI::App* c) {
    auto* t = c->add_option("--tau", plan.tau, "Total sequence time");
    c->add_option("--tau-ps", tau_ps, "Total sequence time in picoseconds")->excludes(t);
  };
  auto add_opt = [&](CLI::App* c) {
    c->add_option("--restarts", plan.restarts, "Jittered restarts");
    c->add_option("--max-iter", plan.max_iterations, "Simplex iterations per start");
  };
  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", plan.out, "Output file");
  };

  auto* filter = app.add_subcommand("filter", "Sample the filter function F(u)");
  add_seq(filter);
  add_grid(filter);
  add_out(filter);
  filter->add_option("--format", plan.format)->check(CLI::IsMember({"csv", "json"}));

  auto* coherence = app.add_subcommand("coherence", "Coherence W(tau) = exp(-chi)");
  add_seq(coherence);
  add_spectrum(coherence);
  add_tau(coherence);
  coherence->add_option("--tau-min", plan.tau_min, "Log grid start");
  coherence->add_option("--tau-max", plan.tau_max, "Log grid end");
  coherence->add_option("--tau-count", plan.tau_count, "Log grid points");
  coherence->add_option("--source", plan.source, "fixed or lodd")
      ->check(CLI::IsMember({"fixed", "lodd"}));
  add_opt(coherence);
  add_out(coherence);
  coherence->add_option("--format", plan.format)->check(CLI::IsMember({"csv", "json"}));

  auto* metrics = app.add_subcommand("metrics", "Filter metrics report (JSON)");
  add_seq(metrics);
  add_grid(metrics);
  metrics->add_option("--bandpass-omega-max", plan.bandpass_omega_max,
                      "Upper frequency of the modified-filter scan (tau = 1)");
  add_out(metrics);

  auto* compare = app.add_subcommand("compare", "Pointwise ratio F_a / F_b");
  compare->add_option("--a", plan.seq_a, "Numerator sequence")->required();
  compare->add_option("--b", plan.seq_b, "Denominator sequence")->required();
  add_grid(compare);
  add_out(compare);

  auto* optimize = app.add_subcommand("optimize", "Sequence optimization");
  optimize->require_subcommand(1, 1);
  for (const char* mode : {"lodd", "ofdd", "badd"}) {
    auto* m = optimize->add_subcommand(mode);
    m->add_option("--n", plan.n, "Number of pulses");
    m->add_option("--seed", plan.seed, "Restart jitter seed");
    add_opt(m);
    add_out(m);
    if (std::string_view(mode) == "ofdd") {
      m->add_option("--u-max", plan.u_cut, "Area cutoff in u");
      continue;
    }
    add_spectrum(m);
    add_tau(m);
    if (std::string_view(mode) == "badd") {
      auto* ts = m->add_option("--tau-switch", plan.tau_switch, "Shortest allowed segment");
      m->add_option("--tau-switch-ps", tau_switch_ps, "Shortest segment in picoseconds")->excludes(ts);
      m->add_option("--n-max", plan.n_max, "Largest pulse count to try");
    }
  }

  auto* oracle = app.add_subcommand("oracle", "Time-domain cross-check of chi (JSON)");
  add_seq(oracle);
  add_spectrum(oracle);
  add_tau(oracle);
  oracle->add_option("--n-steps", plan.n_steps, "Time steps");
  oracle->add_option("--mc", plan.mc, "Monte Carlo realizations");
  oracle->add_option("--seed", plan.seed, "Monte Carlo seed");
  add_out(oracle);

  auto* figures = app.add_subcommand("figures", "Figure data bundles");
  figures->add_option("--which", plan.which, "ff1, ff2, ff3, ff4, ff5 or lodd")->required();
  figures->add_option("--out-dir", plan.out_dir, "Output directory");
  figures->add_option("--n", plan.n, "Pulse count for the lodd suite");
  figures->add_option("--seed", plan.seed, "Restart jitter seed");
  add_grid(figures);

  std::vector<const char*> args(argv, argv + argc);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    plan.command = "help";
    plan.out = app.help();
    return plan;
  } catch (const CLI::CallForAllHelp&) {
    plan.command = "help";
    plan.out = app.help("", CLI::AppFormatMode::All);
    return plan;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (auto* sub : app.get_subcommands()) {
    plan.command = sub->get_name();
    for (auto* inner : sub->get_subcommands()) plan.subcommand = inner->get_name();
  }
  if (tau_ps) plan.tau = *tau_ps * kPico;
  if (tau_switch_ps) plan.tau_switch = *tau_switch_ps * kPico;
  if (!plan.seq.empty() && !plan.family.empty()) throw UsageError("use either --seq or --family");
  if (plan.ppd < 1) throw UsageError("--ppd must be >= 1");
  if (plan.command == "figures") {
    if (plan.u_min == 1e-3 && plan.u_max == 1e3 && plan.ppd == 50 && plan.which != "ff3") {
      // figure defaults reach the rounding floor of the high-order filters
      plan.u_min = 1e-4;
      plan.u_max = 1e4;
    }
  }
  return plan;
}

int execute(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  if (plan.command == "help") {
    out << plan.out.string();
    return 0;
  }
  json summary{{"command", plan.command}};
  if (!plan.subcommand.empty()) summary["mode"] = plan.subcommand;
  try {
    std::vector<Artifact> artifacts;
    json result;
    if (plan.command == "filter") {
      result = cmd_filter(plan, artifacts);
    } else if (plan.command == "coherence") {
      result = cmd_coherence(plan, artifacts);
    } else if (plan.command == "metrics") {
      result = cmd_metrics(plan, artifacts);
    } else if (plan.command == "compare") {
      result = cmd_compare(plan, artifacts);
    } else if (plan.command == "optimize") {
      result = cmd_optimize(plan, artifacts);
    } else if (plan.command == "oracle") {
      result = cmd_oracle(plan, artifacts);
    } else if (plan.command == "figures") {
      result = cmd_figures(plan, artifacts);
    } else {
      throw UsageError("unknown command " + plan.command);
    }
    commit(artifacts);
    summary["status"] = "ok";
    summary["result"] = result;
    summary["artifacts"] = artifact_list(artifacts);
    out << io::dump(summary) << '\n';
    return 0;
  } catch (const UsageError& e) {
    err << "dd: " << e.what() << '\n';
    summary["status"] = "error";
    summary["error"] = "Usage";
    summary["message"] = e.what();
    out << io::dump(summary) << '\n';
    return 2;
  } catch (const Error& e) {
    err << "dd: " << e.what() << '\n';
    summary["status"] = "error";
    summary["error"] = std::string(to_string(e.kind()));
    summary["message"] = e.what();
    out << io::dump(summary) << '\n';
    return exit_code(e.kind());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunPlan plan;
  try {
    plan = parse_args(argc, argv);
  } catch (const UsageError& e) {
    err << "dd: " << e.what() << "\nRun 'dd --help' for usage.\n";
    return 2;
  } catch (const Error& e) {
    err << "dd: " << e.what() << '\n';
    return 2;
  }
  return execute(plan, out, err);
}

}  // namespace dd
