#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "nfuq/config.hpp"

namespace nfuq {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2, kExitBoundFailure = 3 };

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<Mode> mode;
  std::optional<Space> space;
  std::optional<Method> solver;
};

void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Runs one of solve, bounds, uq, project, selftest with an already parsed
/// config. Errors propagate as exceptions.
int run(const std::string& subcommand, const RunConfig& config, std::ostream& log);

/// Full CLI pipeline: parse, override, run. Every failure is mapped to an
/// exit code and reported as a JSON record on `err` and in
/// `<out>/error.json` when the output directory is known.
int run_cli(const std::string& subcommand, const std::optional<std::filesystem::path>& config_path,
            const Overrides& overrides, std::ostream& log, std::ostream& err);

}  // namespace nfuq
