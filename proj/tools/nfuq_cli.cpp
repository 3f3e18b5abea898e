#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nfuq/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Neural fields with random data: solve, bound checks, Monte Carlo UQ"};
  app.set_version_flag("--version", NFUQ_VERSION);
  app.require_subcommand(1, 1);

  std::string config;
  nfuq::Overrides ov;
  std::string out;
  std::uint64_t seed = 0;
  int samples = 0;
  nfuq::Mode mode{};
  nfuq::Space space{};
  nfuq::Method solver{};

  const std::map<std::string, nfuq::Mode> modes{{"linear", nfuq::Mode::Linear}, {"nonlinear", nfuq::Mode::Nonlinear}};
  const std::map<std::string, nfuq::Space> spaces{{"C", nfuq::Space::C}, {"L2", nfuq::Space::L2}};
  const std::map<std::string, nfuq::Method> solvers{{"picard", nfuq::Method::Picard}, {"rk", nfuq::Method::Rk}};

  const std::pair<const char*, const char*> commands[] = {
      {"solve", "Solve one realisation and write the time series"},
      {"bounds", "Check the a-priori solution bounds on seeded realisations"},
      {"uq", "Monte Carlo mean and variance of u(x, T)"},
      {"project", "Solve the projected problem on coarse hat-function spaces"},
      {"selftest", "Run built-in checks with closed-form answers"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "INI config file")->check(CLI::ExistingFile);
    auto* o_out = sub->add_option("--out", out, "Output directory");
    auto* o_seed = sub->add_option("--seed", seed, "Seed (single run) or base seed (sample sweeps)");
    auto* o_samples = sub->add_option("--samples", samples, "Number of realisations");
    auto* o_mode = sub->add_option("--mode", mode, "linear|nonlinear")->transform(CLI::CheckedTransformer(modes));
    auto* o_space = sub->add_option("--space", space, "C|L2")->transform(CLI::CheckedTransformer(spaces));
    auto* o_solver = sub->add_option("--solver", solver, "picard|rk")->transform(CLI::CheckedTransformer(solvers));
    sub->final_callback([&, o_out, o_seed, o_samples, o_mode, o_space, o_solver] {
      if (*o_out) ov.out = out;
      if (*o_seed) ov.seed = seed;
      if (*o_samples) ov.samples = samples;
      if (*o_mode) ov.mode = mode;
      if (*o_space) ov.space = space;
      if (*o_solver) ov.solver = solver;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nfuq::kExitValidation;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  std::optional<std::filesystem::path> path;
  if (!config.empty()) path = config;
  return nfuq::run_cli(name, path, ov, std::cout, std::cerr);
}
