#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ousig/io.hpp"

namespace {

std::string binary_path() {
  const char* env = std::getenv("OUSIG_BIN");
  REQUIRE(env != nullptr);
  return env;
}

int run(const std::string& args) {
  const std::string cmd = binary_path() + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_config(const std::string& name, const std::string& body) {
  const std::string path = "/tmp/ousig_e2e_" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("limit subcommand emits the 1-D series") {
  const std::string cfg = write_config("limit.cfg",
                                       "d = 1\n"
                                       "M = 1\n"
                                       "p = 1\n"
                                       "N = 3\n"
                                       "t = 1\n");
  const std::string out = "/tmp/ousig_e2e_limit.json";
  REQUIRE(run("limit --config " + cfg + " --out " + out) == 0);
  const auto j = ousig::io::json::parse(slurp(out));
  const auto series = ousig::io::series_from_json(j.at("series"));
  CHECK(series.level(0).entries()[0] == 1.0);
  CHECK(series.level(1).entries()[0] == doctest::Approx(-1.0));
  CHECK(series.level(2).entries()[0] == doctest::Approx(0.5));
  CHECK(series.level(3).entries()[0] == doctest::Approx(-1.0 / 6));
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("sweep subcommand produces a CSV with an in-band slope") {
  const std::string cfg = write_config("sweep.cfg",
                                       "d = 1\n"
                                       "M = 1\n"
                                       "p = 1\n"
                                       "N = 3\n"
                                       "t = 1\n"
                                       "n = 3\n"
                                       "m_grid = 0.2,0.1,0.05,0.025\n");
  const std::string out_csv = "/tmp/ousig_e2e_sweep.csv";
  const std::string out_json = "/tmp/ousig_e2e_sweep.json";
  REQUIRE(run("sweep --config " + cfg + " --format csv --out " + out_csv) ==
          0);
  const std::string csv = slurp(out_csv);
  CHECK(csv.find("m,error,bound") == 0);
  REQUIRE(run("sweep --config " + cfg + " --out " + out_json) == 0);
  const auto j = ousig::io::json::parse(slurp(out_json));
  const double slope = j.at("slope").get<double>();
  CHECK(slope >= 0.8);
  CHECK(slope <= 1.3);
  std::remove(cfg.c_str());
  std::remove(out_csv.c_str());
  std::remove(out_json.c_str());
}

TEST_CASE("mc subcommand writes a reproducible report") {
  const std::string cfg = write_config("mc.cfg",
                                       "d = 2\n"
                                       "M = 1,1;0,2\n"
                                       "m = 0.5\n"
                                       "p = 1,0\n"
                                       "N = 2\n"
                                       "t = 1\n"
                                       "paths = 2000\n"
                                       "steps = 16\n"
                                       "seed = 9\n");
  const std::string out1 = "/tmp/ousig_e2e_mc1.json";
  const std::string out2 = "/tmp/ousig_e2e_mc2.json";
  REQUIRE(run("mc --config " + cfg + " --out " + out1) == 0);
  REQUIRE(run("mc --config " + cfg + " --threads 4 --out " + out2) == 0);
  const std::string report1 = slurp(out1);
  auto j1 = ousig::io::json::parse(report1);
  auto j2 = ousig::io::json::parse(slurp(out2));
  j1.erase("config");
  j2.erase("config");  // config echoes differ in the threads field
  CHECK(j1.dump() == j2.dump());
  // Identical invocation is byte-identical.
  REQUIRE(run("mc --config " + cfg + " --out " + out2) == 0);
  CHECK(slurp(out2) == report1);
  const auto mean = ousig::io::series_from_json(
      ousig::io::json::parse(report1).at("mean"));
  CHECK(mean.level(0).entries()[0] == 1.0);
  std::remove(cfg.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("mc subcommand rejects mismatched dimensions with exit 1") {
  const std::string cfg = write_config("bad.cfg",
                                       "d = 2\n"
                                       "M = 1,1;0,2\n"
                                       "m = 0.5\n"
                                       "p = 1,0,0\n"
                                       "N = 2\n"
                                       "t = 1\n"
                                       "paths = 100\n"
                                       "steps = 8\n");
  CHECK(run("mc --config " + cfg) == 1);
  std::remove(cfg.c_str());
}

TEST_CASE("non-Hurwitz model exits with the validation code") {
  const std::string cfg = write_config("rot.cfg",
                                       "d = 2\n"
                                       "M = 0,1;-1,0\n"
                                       "m = 0.5\n"
                                       "p = 0,0\n"
                                       "N = 2\n"
                                       "t = 1\n");
  CHECK(run("compute --config " + cfg) == 2);
  std::remove(cfg.c_str());
}

TEST_CASE("check subcommand passes on the 1-D model") {
  const std::string cfg = write_config("check.cfg",
                                       "d = 1\n"
                                       "M = 1\n"
                                       "m = 1\n"
                                       "p = 0\n"
                                       "N = 2\n"
                                       "t = 1\n");
  const std::string out = "/tmp/ousig_e2e_check.json";
  REQUIRE(run("check --config " + cfg + " --out " + out) == 0);
  const auto j = ousig::io::json::parse(slurp(out));
  CHECK(j.at("pass").get<bool>());
  for (const auto& res : j.at("residuals"))
    CHECK(res.at("max_residual").get<double>() <= 1e-6);
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("missing required flag is a usage error") {
  CHECK(run("limit") == 1);
  CHECK(run("frobnicate --config /tmp/nope") == 1);
}
