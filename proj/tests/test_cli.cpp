#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include "nfuq/config.hpp"
#include "nfuq/io.hpp"
#include "support.hpp"

using namespace nfuq;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string("\"") + NFUQ_CLI_PATH + "\" " + args + " >\"" + (dir / "stdout.txt").string() +
                          "\" 2>\"" + (dir / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::map<std::string, std::string> summary_section(const fs::path& file) {
  std::istringstream in(test::read_file(file));
  std::map<std::string, std::string> kv;
  bool inside = false;
  for (std::string line; std::getline(in, line);) {
    if (line == "[summary]") {
      inside = true;
      continue;
    }
    const auto eq = line.find(" = ");
    if (inside && eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

constexpr const char* kDegenerate = R"([domain]
a = 0
b = 5
n = 21
[noise]
mode = nonlinear
firing_max = 2, 2
firing_slope = 12, 12
forcing_speed = 3, 3
kernel_perturbation = 1, 1
[solver]
T = 2
[uq]
samples = 10
)";

}  // namespace

TEST_CASE("uq on degenerate data writes zero variance") {
  const auto dir = test::scratch_dir("cli_uq");
  test::write_file(dir / "run.ini", kDegenerate);
  const auto before = test::read_file(dir / "run.ini");
  const auto out = dir / "out";
  REQUIRE(run_cli("uq --config " + (dir / "run.ini").string() + " --out " + out.string(), dir) == 0);
  CHECK(test::read_file(dir / "run.ini") == before);

  const auto var = read_field_csv(out / "var.csv");
  REQUIRE(var.size() == 21);
  for (double v : var) CHECK(std::abs(v) <= 1e-12);
  CHECK(fs::exists(out / "mean.csv"));
  CHECK(fs::exists(out / "samples" / "sample_00009.csv"));
  const auto s = summary_section(out / "summary.txt");
  CHECK(s.at("sample_count") == "10");
  CHECK(s.at("bound_pass_rate") == "1");
  CHECK(parse_config(out / "summary.txt").uq.samples == 10);
}

TEST_CASE("bounds over fifty realisations pass") {
  const auto dir = test::scratch_dir("cli_bounds");
  const auto out = dir / "out";
  REQUIRE(run_cli("bounds --samples 50 --seed 3 --out " + out.string(), dir) == 0);
  const auto s = summary_section(out / "summary.txt");
  CHECK(s.at("sample_count") == "50");
  CHECK(s.at("pass_rate") == "1");
  CHECK(s.at("failed_seeds").empty());
  std::istringstream csv(test::read_file(out / "bounds.csv"));
  int rows = -1;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 50);
}

TEST_CASE("solve writes a time series") {
  const auto dir = test::scratch_dir("cli_solve");
  const auto out = dir / "out";
  test::write_file(dir / "run.ini", "[solver]\nT = 1\n");
  REQUIRE(run_cli("solve --config " + (dir / "run.ini").string() + " --seed 4 --out " + out.string(), dir) == 0);
  CHECK(fs::exists(out / "solution" / "index.csv"));
  CHECK(fs::exists(out / "solution" / "state_0200.csv"));
  CHECK(read_field_csv(out / "final.csv").size() == 41);
  const auto s = summary_section(out / "summary.txt");
  CHECK(std::stod(s.at("voc_residual")) < 1e-2);

  const auto pic = dir / "pic";
  REQUIRE(run_cli("solve --config " + (dir / "run.ini").string() + " --solver picard --out " + pic.string(), dir) ==
          0);
  CHECK(fs::exists(pic / "picard_trace.csv"));
  CHECK(summary_section(pic / "summary.txt").contains("picard_iterations"));
}

TEST_CASE("project and selftest succeed") {
  const auto dir = test::scratch_dir("cli_project");
  const auto out = dir / "out";
  test::write_file(dir / "run.ini", "[solver]\nT = 2\n[projection]\ncoarse = 5, 11\n");
  REQUIRE(run_cli("project --config " + (dir / "run.ini").string() + " --out " + out.string(), dir) == 0);
  CHECK(fs::exists(out / "projected_5.csv"));
  CHECK(fs::exists(out / "projected_11.csv"));
  CHECK(summary_section(out / "summary.txt").at("n11.pass_kernel_norm") == "true");

  REQUIRE(run_cli("selftest --out " + (dir / "self").string(), dir) == 0);
}

TEST_CASE("bad input exits with status 1 and an error record") {
  const auto dir = test::scratch_dir("cli_bad");
  const auto out = dir / "out";
  test::write_file(dir / "bad.ini", "[run]\nseed = 2\n[noise]\nfiring_slope = 5, 1\n");
  CHECK(run_cli("solve --config " + (dir / "bad.ini").string() + " --out " + out.string(), dir) == 1);
  const auto err = nlohmann::json::parse(test::read_file(out / "error.json"));
  CHECK(err.at("status") == "error");
  CHECK(err.at("exit_code") == 1);
  CHECK(err.at("kind") == "parse");
  CHECK(err.at("line") == 4);
  CHECK(err.at("message").get<std::string>().find("noise.firing_slope") != std::string::npos);
  CHECK(nlohmann::json::parse(test::read_file(dir / "stderr.txt")) == err);

  CHECK(run_cli("uq --samples 1 --out " + out.string(), dir) == 1);
  CHECK(run_cli("solve --mode sideways", dir) == 1);
  CHECK(run_cli("frobnicate", dir) == 1);
  CHECK(run_cli("solve --config " + (dir / "missing.ini").string(), dir) == 1);
  CHECK(run_cli("--help", dir) == 0);
}

TEST_CASE("numerical failure exits with status 2") {
  const auto dir = test::scratch_dir("cli_numeric");
  const auto out = dir / "out";
  test::write_file(dir / "run.ini", "[solver]\nmethod = picard\nmax_iter = 2\nT = 5\n");
  CHECK(run_cli("solve --config " + (dir / "run.ini").string() + " --out " + out.string(), dir) == 2);
  const auto err = nlohmann::json::parse(test::read_file(out / "error.json"));
  CHECK(err.at("kind") == "numerical");
  CHECK(err.at("exit_code") == 2);
}
