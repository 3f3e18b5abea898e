#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nfuq/domain.hpp"
#include "nfuq/projection.hpp"
#include "nfuq/random_data.hpp"
#include "nfuq/solver.hpp"

namespace nfuq {

struct DomainConfig {
  DomainKind kind = DomainKind::Interval;
  double a = 0.0;
  double b = 5.0;
  int n = 41;
  Rectangle extents{0.0, 1.0, 0.0, 1.0};
  int nx = 21;
  int ny = 21;
  std::string mesh;

  bool operator==(const DomainConfig& o) const {
    return kind == o.kind && a == o.a && b == o.b && n == o.n && extents.x0 == o.extents.x0 &&
           extents.x1 == o.extents.x1 && extents.y0 == o.extents.y0 && extents.y1 == o.extents.y1 && nx == o.nx &&
           ny == o.ny && mesh == o.mesh;
  }
};

struct UqConfig {
  int samples = 100;
  std::uint64_t base_seed = 0;
  std::vector<int> p_list{1, 2, 4};
  bool write_samples = true;
  bool operator==(const UqConfig&) const = default;
};

struct ProjectionConfig {
  std::vector<int> coarse{11, 21};
  /// Unset: interpolatory on C, orthogonal on L2.
  std::optional<ProjectorKind> kind;
  bool operator==(const ProjectionConfig&) const = default;
};

/// Fully resolved run configuration.
struct RunConfig {
  DomainConfig domain;
  NoiseSpec noise;
  Method method = Method::Rk;
  double T = 10.0;
  PicardOptions picard;
  RkOptions rk;
  Space space = Space::C;
  std::uint64_t seed = 0;
  UqConfig uq;
  ProjectionConfig projection;
  std::string output = "nfuq_out";

  SolverOptions solver_options() const { return {method, picard, rk}; }
  Domain build_domain() const;

  bool operator==(const RunConfig&) const = default;
};

/// Parses an INI-style file: `[section]` headers, `key = value` lines, `#`
/// comments. Unknown or duplicate keys, type errors, and range violations
/// raise ParseError naming the key and line. A trailing `[summary]` section
/// (as written by the CLI) is skipped, so run summaries reparse as configs.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_string(const std::string& text);

/// Every key with its resolved value; 17 significant digits for reals.
std::string serialize(const RunConfig& config);

}  // namespace nfuq
