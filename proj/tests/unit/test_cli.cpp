#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

fs::path workdir() {
  const char* env = std::getenv("DD_TEST_WORKDIR");
  fs::path p = env ? fs::path(env) : fs::temp_directory_path() / "ddfilter_test_cli";
  fs::create_directories(p);
  return p;
}

Run dd_run(std::vector<std::string> args) {
  args.insert(args.begin(), "dd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dd::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path ohmic_config() {
  const auto p = workdir() / "ohmic.json";
  std::ofstream(p) << R"({"variant":"ohmic_sharp_cutoff","amplitude":1,"cutoff":1})";
  return p;
}

}  // namespace

TEST_CASE("parse_args builds plans") {
  const char* a[] = {"dd", "filter", "--family", "udd", "--n", "10", "--u-min", "1e-3", "--u-max", "1e3",
                     "--ppd", "50", "--out", "f.csv"};
  const auto plan = dd::parse_args(14, a);
  CHECK(plan.command == "filter");
  CHECK(plan.family == "udd");
  CHECK(plan.n == 10);
  CHECK(plan.out == "f.csv");

  const char* b[] = {"dd", "optimize", "lodd", "--spectrum", "ohmic.json", "--n", "6", "--tau", "5", "--seed", "7"};
  const auto p2 = dd::parse_args(11, b);
  CHECK(p2.command == "optimize");
  CHECK(p2.subcommand == "lodd");
  CHECK(*p2.tau == 5.0);
  CHECK(p2.seed == 7);

  const char* c[] = {"dd", "oracle", "--seq", "cpmg:4", "--tau-ps", "2"};
  CHECK(*dd::parse_args(6, c).tau == doctest::Approx(2e-12));
}

TEST_CASE("usage errors exit 2") {
  CHECK(dd_run({"bogus"}).code == 2);
  CHECK(dd_run({"filter", "--nope"}).code == 2);
  CHECK(dd_run({"filter", "--seq", "xdd:3"}).code == 2);
  CHECK(dd_run({}).code == 2);
  CHECK(dd_run({"--help"}).code == 0);
}

TEST_CASE("bad configs exit 2, computation errors exit 1") {
  const auto bad = workdir() / "bad.json";
  std::ofstream(bad) << R"({"variant":"ohmic_sharp_cutoff","amplitude":1})";
  const auto r = dd_run({"coherence", "--seq", "udd:4", "--spectrum", bad.string(), "--tau", "1"});
  CHECK(r.code == 2);
  CHECK(nlohmann::json::parse(r.out)["error"] == "BadConfig");

  const auto metrics = dd_run({"metrics", "--seq", "udd:8", "--u-max", "1"});
  CHECK(metrics.code == 1);
  CHECK(nlohmann::json::parse(metrics.out)["error"] == "NoCrossing");
}

TEST_CASE("filter writes a csv and a one-line summary") {
  const auto out = workdir() / "f.csv";
  fs::remove(out);
  const auto r = dd_run({"filter", "--family", "udd", "--n", "10", "--ppd", "50", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "ok");
  CHECK(j["result"]["points"] == 300);
  const auto csv = slurp(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 301);
}

TEST_CASE("oracle reports agree and repeat byte for byte") {
  const auto spec = ohmic_config();
  const auto a = workdir() / "oracle_a.json";
  const auto b = workdir() / "oracle_b.json";
  for (const auto& p : {a, b}) {
    const auto r = dd_run({"oracle", "--seq", "cpmg:4", "--spectrum", spec.string(), "--tau", "5", "--n-steps", "8192",
                           "--mc", "2000", "--seed", "1", "--out", p.string()});
    REQUIRE(r.code == 0);
  }
  CHECK(slurp(a) == slurp(b));
  const auto j = nlohmann::json::parse(slurp(a));
  CHECK(j["rel_diff"].get<double>() < 0.01);
  for (const char* key : {"chi_freq", "chi_grammian", "rel_diff", "N", "w_mc", "stderr", "M", "seed"}) {
    CHECK(j.contains(key));
  }
}

TEST_CASE("optimize output is deterministic") {
  const auto spec = ohmic_config();
  const auto a = workdir() / "lodd_a.json";
  const auto b = workdir() / "lodd_b.json";
  for (const auto& p : {a, b}) {
    REQUIRE(dd_run({"optimize", "lodd", "--spectrum", spec.string(), "--n", "4", "--tau", "5", "--seed", "7", "--out",
                    p.string()})
                .code == 0);
  }
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("compare flags the crossover band") {
  const auto out = workdir() / "ratio.csv";
  const auto r = dd_run({"compare", "--a", "udd:10", "--b", "cpmg:10", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(out).find(",gt\n") != std::string::npos);
  CHECK(!nlohmann::json::parse(r.out)["result"]["bands_a_above_b"].empty());
}

TEST_CASE("figure bundles") {
  const auto dir = workdir() / "ff1";
  fs::remove_all(dir);
  const auto r = dd_run({"figures", "--which", "ff1", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"cpmg", "pdd", "udd"}) {
    for (int n = 3; n <= 10; ++n) CHECK(fs::exists(dir / ("ff1_" + std::string(f) + "_" + std::to_string(n) + ".csv")));
  }
  CHECK(dd_run({"figures", "--which", "ff9"}).code == 2);
}

TEST_CASE("failed commands leave no output behind") {
  const auto out = workdir() / "never.json";
  fs::remove(out);
  const auto r = dd_run({"optimize", "badd", "--spectrum", ohmic_config().string(), "--tau", "1", "--tau-switch", "0.6",
                         "--out", out.string()});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.out)["error"] == "Infeasible");
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("physical units convert at the boundary") {
  const auto spec = workdir() / "supra.json";
  std::ofstream(spec) << R"({"variant":"supra_ohmic_exp","alpha":1.14e-26,"omega_c":3})";
  const auto r = dd_run({"coherence", "--seq", "udd:4", "--spectrum", spec.string(), "--omega-rad-per-ps", "--tau-ps",
                         "10", "--format", "json"});
  REQUIRE(r.code == 0);
  const double chi = nlohmann::json::parse(r.out)["result"]["chi_last"].get<double>();
  CHECK(chi > 0.0);
  CHECK(std::isfinite(chi));
}
