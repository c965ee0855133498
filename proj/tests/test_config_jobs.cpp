#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgholo/config.hpp"
#include "cgholo/error.hpp"
#include "cgholo/jobs.hpp"

using namespace cgholo;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMiniConfig = R"(# comment line
[metric]
dimension = 2
builtin = euclidean
p11 = 0
p12 = 0
p22 = 0

[curve]
c1 = t
c2 = 0
domain = 0 1
samples = 5

[ambient]
mode = hyperbolic_upper_half

[domain]
type = H2

[job]
name = verify

[job]
name = report
)";
}  // namespace

TEST_CASE("config parser: sections, comments, repeated sections") {
  Config cfg = Config::parse(kMiniConfig);
  REQUIRE(cfg.find("metric") != nullptr);
  CHECK(cfg.find("metric")->require("builtin") == "euclidean");
  CHECK(cfg.find("metric")->require_double("dimension") == doctest::Approx(2));
  CHECK(cfg.find("curve")->get_int("samples", 0) == 5);
  auto jobs = cfg.find_all("job");
  REQUIRE(jobs.size() == 2);
  CHECK(jobs[0]->require("name") == "verify");
  CHECK(jobs[1]->require("name") == "report");
  CHECK(cfg.find("nope") == nullptr);

  auto dom = cfg.find("curve")->get_doubles("domain");
  REQUIRE(dom.size() == 2);
  CHECK(dom[0] == doctest::Approx(0.0));
  CHECK(dom[1] == doctest::Approx(1.0));
}

TEST_CASE("config parser error cases") {
  CHECK_THROWS_AS(Config::parse("key = value\n"), ConfigError);      // entry before section
  CHECK_THROWS_AS(Config::parse("[sec\nkey = v\n"), ConfigError);    // unterminated header
  CHECK_THROWS_AS(Config::parse("[sec]\nnot-a-pair\n"), ConfigError);
  Config cfg = Config::parse("[sec]\na = 1\n");
  CHECK_THROWS_AS(cfg.find("sec")->require("missing"), ConfigError);
  CHECK_THROWS_AS(cfg.find("sec")->get_doubles("missing"), ConfigError);
  CHECK(cfg.find("sec")->get_double("missing", 7.5) == doctest::Approx(7.5));
  CHECK(cfg.find("sec")->get_bool("missing", true));
}

TEST_CASE("run_config produces report, samples, and passing claims") {
  Config cfg = Config::parse(kMiniConfig);
  fs::path out = fs::temp_directory_path() / "cgholo_test_run";
  fs::remove_all(out);
  RunOptions opts;
  opts.ladder_max_k = 8;  // keep the unit test fast
  RunResult res = run_config(cfg, out.string(), opts);
  CHECK(res.exit_code == 0);
  CHECK(!res.claims.empty());
  for (const auto& c : res.claims) CHECK_MESSAGE(c.pass, c.job, "/", c.name);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "samples.csv"));
  CHECK_FALSE(fs::exists(out / "plots"));

  std::string rep = slurp(out / "report.json");
  CHECK(rep.find("\"schema_version\"") != std::string::npos);
  CHECK(rep.find("\"claims\"") != std::string::npos);
  CHECK(rep.find("tension") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("report.json is byte-identical across repeated runs") {
  Config cfg = Config::parse(kMiniConfig);
  fs::path o1 = fs::temp_directory_path() / "cgholo_det_a";
  fs::path o2 = fs::temp_directory_path() / "cgholo_det_b";
  fs::remove_all(o1);
  fs::remove_all(o2);
  RunOptions opts;
  opts.ladder_max_k = 8;
  run_config(cfg, o1.string(), opts);
  run_config(cfg, o2.string(), opts);
  CHECK(slurp(o1 / "report.json") == slurp(o2 / "report.json"));
  CHECK(slurp(o1 / "samples.csv") == slurp(o2 / "samples.csv"));
  fs::remove_all(o1);
  fs::remove_all(o2);
}

TEST_CASE("plots are emitted when requested") {
  Config cfg = Config::parse(kMiniConfig);
  fs::path out = fs::temp_directory_path() / "cgholo_plot_run";
  fs::remove_all(out);
  RunOptions opts;
  opts.plots = true;
  opts.ladder_max_k = 8;
  run_config(cfg, out.string(), opts);
  CHECK(fs::exists(out / "plots"));
  bool any_svg = false;
  for (auto& e : fs::directory_iterator(out / "plots"))
    any_svg = any_svg || e.path().extension() == ".svg";
  CHECK(any_svg);
  fs::remove_all(out);
}

TEST_CASE("invalid configurations raise ConfigError") {
  fs::path out = fs::temp_directory_path() / "cgholo_bad_run";
  CHECK_THROWS_AS(
      run_config(Config::parse("[metric]\ndimension = 2\nbuiltin = euclidean\n"), out.string()),
      Error);
  CHECK_THROWS_AS(run_config_file("/nonexistent/path.cfg", out.string()), Error);
  // unknown job name
  std::string bad = kMiniConfig;
  bad += "\n[job]\nname = frobnicate\n";
  CHECK_THROWS_AS(run_config(Config::parse(bad), out.string()), ConfigError);
  fs::remove_all(out);
}
