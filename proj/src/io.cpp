#include "nfuq/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "nfuq/errors.hpp"

namespace nfuq {

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError(fmt::format("cannot write '{}'", file.string()));
  return out;
}

}  // namespace

void write_field_csv(const std::filesystem::path& file, const Domain& domain, std::span<const double> values) {
  if (values.size() != domain.size())
    throw ValidationError(fmt::format("field has {} values for {} nodes", values.size(), domain.size()));
  auto out = open_out(file);
  const int d = domain.dim();
  std::string buf;
  for (int k = 0; k < d; ++k) buf += fmt::format("x{},", k);
  buf += "value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Point& x = domain.node(i);
    for (int k = 0; k < d; ++k) buf += fmt::format("{:.17g},", x[k]);
    buf += fmt::format("{:.17g}\n", values[i]);
  }
  out << buf;
}

std::vector<double> read_field_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError(fmt::format("cannot read '{}'", file.string()));
  std::string line;
  std::getline(in, line);
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return values;
}

void write_time_series(const std::filesystem::path& dir, const Domain& domain, const SolutionPath& path) {
  std::filesystem::create_directories(dir);
  std::string index = "time,file\n";
  for (std::size_t k = 0; k < path.steps(); ++k) {
    const std::string name = fmt::format("state_{:04d}.csv", k);
    write_field_csv(dir / name, domain, path.states[k]);
    index += fmt::format("{:.17g},{}\n", path.times[k], name);
  }
  auto out = open_out(dir / "index.csv");
  out << index;
}

void write_summary(const std::filesystem::path& file, const RunConfig& config, const SummaryEntries& entries) {
  auto out = open_out(file);
  out << serialize(config) << "\n[summary]\n";
  for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
}

}  // namespace nfuq
