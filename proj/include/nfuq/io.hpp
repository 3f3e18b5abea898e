#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nfuq/config.hpp"
#include "nfuq/domain.hpp"
#include "nfuq/solver.hpp"

namespace nfuq {

/// Exact decimal form of a double (17 significant digits).
std::string format_real(double x);

/// One row per node: coordinates (as many as the domain dimension) then the
/// value. Header `x0[,x1[,x2]],value`.
void write_field_csv(const std::filesystem::path& file, const Domain& domain, std::span<const double> values);

/// Reads the value column back.
std::vector<double> read_field_csv(const std::filesystem::path& file);

/// Writes `state_NNNN.csv` for every time of the path into `dir` plus
/// `index.csv` with columns `time,file`.
void write_time_series(const std::filesystem::path& dir, const Domain& domain, const SolutionPath& path);

using SummaryEntries = std::vector<std::pair<std::string, std::string>>;

/// The serialized config followed by a `[summary]` section.
void write_summary(const std::filesystem::path& file, const RunConfig& config, const SummaryEntries& entries);

}  // namespace nfuq
