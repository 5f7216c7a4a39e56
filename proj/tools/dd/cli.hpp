#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dd {

/// Bad command line or config; maps to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunPlan {
  std::string command;
  /// lodd / ofdd / badd for `optimize`.
  std::string subcommand;

  /// Sequence token ("udd:10", "fid", "@seq.json"); family + n otherwise.
  std::string seq;
  std::string family;
  int n = -1;
  std::string seq_a;
  std::string seq_b;

  double u_min = 1e-3;
  double u_max = 1e3;
  int ppd = 50;
  std::string variant = "ideal";
  double width_ratio = 0.0;
  double precision = 0.0;

  std::filesystem::path spectrum;
  /// Spectrum frequency parameters are in rad/ps; converted to rad/s.
  bool omega_per_ps = false;
  std::optional<double> tau;
  std::optional<double> tau_min;
  std::optional<double> tau_max;
  int tau_count = 20;
  /// Sequence applied along a coherence curve: fixed, or LODD per tau.
  std::string source = "fixed";

  int restarts = 2;
  int max_iterations = 3000;
  double u_cut = 5.0;
  std::optional<double> tau_switch;
  int n_max = 100;
  double bandpass_omega_max = 100.0;

  std::size_t n_steps = 8192;
  std::size_t mc = 10000;

  std::string which;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  std::filesystem::path out_dir = ".";
  std::string format = "csv";
};

/// Throws UsageError on unknown commands or flags and on inconsistent
/// options. `--help` is reported through the returned plan's command "help".
RunPlan parse_args(int argc, const char* const* argv);

/// Runs a validated plan: artifacts are written atomically and a one-line
/// JSON summary goes to `out`. Returns 0, 1 on computation errors, 2 on
/// configuration errors.
int execute(const RunPlan& plan, std::ostream& out, std::ostream& err);

/// parse_args + execute with exit-status mapping.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dd
