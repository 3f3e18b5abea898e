#include "nfuq/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "nfuq/errors.hpp"

namespace nfuq {

Domain RunConfig::build_domain() const {
  switch (domain.kind) {
    case DomainKind::Interval: return build_interval(domain.a, domain.b, domain.n);
    case DomainKind::Grid2d: return build_grid2d(domain.extents, domain.nx, domain.ny);
    case DomainKind::TriangulatedSurface: return load_mesh(domain.mesh);
  }
  throw ValidationError("unknown domain kind");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& s) {
  if (s.empty()) throw ValidationError("expected a real number, got an empty value");
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(x))
    throw ValidationError(fmt::format("expected a finite real number, got '{}'", s));
  return x;
}

long long parse_integer(const std::string& s) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ValidationError(fmt::format("expected an integer, got '{}'", s));
  return x;
}

int parse_int_at_least(const std::string& s, int lo) {
  const long long x = parse_integer(s);
  if (x < lo || x > 1'000'000'000) throw ValidationError(fmt::format("must be an integer >= {}, got {}", lo, s));
  return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError(fmt::format("expected an unsigned 64-bit integer, got '{}'", s));
  return x;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ValidationError(fmt::format("expected true or false, got '{}'", s));
}

double parse_positive(const std::string& s) {
  const double x = parse_real(s);
  if (!(x > 0.0)) throw ValidationError(fmt::format("must be positive, got {}", s));
  return x;
}

Range parse_range(const std::string& s) {
  const auto parts = split_list(s);
  if (parts.size() == 1) {
    const double c = parse_real(parts[0]);
    return {c, c};
  }
  if (parts.size() != 2) throw ValidationError(fmt::format("expected 'lo, hi', got '{}'", s));
  Range r{parse_real(parts[0]), parse_real(parts[1])};
  if (r.lo > r.hi) throw ValidationError(fmt::format("range lower bound {} exceeds upper bound {}", r.lo, r.hi));
  return r;
}

Point parse_point(const std::string& s) {
  const auto parts = split_list(s);
  if (parts.empty() || parts.size() > 3) throw ValidationError(fmt::format("expected 1 to 3 coordinates, got '{}'", s));
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < parts.size(); ++i) p[i] = parse_real(parts[i]);
  return p;
}

std::vector<int> parse_int_list(const std::string& s, int lo) {
  std::vector<int> out;
  for (const auto& part : split_list(s)) out.push_back(parse_int_at_least(part, lo));
  if (out.empty()) throw ValidationError("expected a non-empty list");
  return out;
}

template <class E>
E parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, E>> options) {
  std::string names;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    names += names.empty() ? name : std::string(", ") + name;
  }
  throw ValidationError(fmt::format("expected one of {{{}}}, got '{}'", names, s));
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"domain.kind",
       [](RunConfig& c, const std::string& v) {
         c.domain.kind = parse_enum<DomainKind>(
             v, {{"interval", DomainKind::Interval}, {"grid2d", DomainKind::Grid2d},
                 {"mesh", DomainKind::TriangulatedSurface}});
       }},
      {"domain.a", [](RunConfig& c, const std::string& v) { c.domain.a = parse_real(v); }},
      {"domain.b", [](RunConfig& c, const std::string& v) { c.domain.b = parse_real(v); }},
      {"domain.n", [](RunConfig& c, const std::string& v) { c.domain.n = parse_int_at_least(v, 2); }},
      {"domain.x0", [](RunConfig& c, const std::string& v) { c.domain.extents.x0 = parse_real(v); }},
      {"domain.x1", [](RunConfig& c, const std::string& v) { c.domain.extents.x1 = parse_real(v); }},
      {"domain.y0", [](RunConfig& c, const std::string& v) { c.domain.extents.y0 = parse_real(v); }},
      {"domain.y1", [](RunConfig& c, const std::string& v) { c.domain.extents.y1 = parse_real(v); }},
      {"domain.nx", [](RunConfig& c, const std::string& v) { c.domain.nx = parse_int_at_least(v, 2); }},
      {"domain.ny", [](RunConfig& c, const std::string& v) { c.domain.ny = parse_int_at_least(v, 2); }},
      {"domain.mesh", [](RunConfig& c, const std::string& v) { c.domain.mesh = v; }},

      {"noise.mode",
       [](RunConfig& c, const std::string& v) {
         c.noise.mode = parse_enum<Mode>(v, {{"linear", Mode::Linear}, {"nonlinear", Mode::Nonlinear}});
       }},
      {"noise.firing_max", [](RunConfig& c, const std::string& v) { c.noise.firing_max = parse_range(v); }},
      {"noise.firing_slope", [](RunConfig& c, const std::string& v) { c.noise.firing_slope = parse_range(v); }},
      {"noise.firing_threshold", [](RunConfig& c, const std::string& v) { c.noise.firing_threshold = parse_real(v); }},
      {"noise.forcing_amplitude",
       [](RunConfig& c, const std::string& v) { c.noise.forcing_amplitude = parse_real(v); }},
      {"noise.forcing_center", [](RunConfig& c, const std::string& v) { c.noise.forcing_center = parse_point(v); }},
      {"noise.forcing_width",
       [](RunConfig& c, const std::string& v) {
         const auto parts = split_list(v);
         if (parts.size() != 3) throw ValidationError(fmt::format("expected three widths, got '{}'", v));
         for (int k = 0; k < 3; ++k) c.noise.forcing_width[k] = parse_positive(parts[k]);
       }},
      {"noise.forcing_speed", [](RunConfig& c, const std::string& v) { c.noise.forcing_speed = parse_range(v); }},
      {"noise.kernel_sigma", [](RunConfig& c, const std::string& v) { c.noise.kernel_sigma = parse_positive(v); }},
      {"noise.kernel_cutoff",
       [](RunConfig& c, const std::string& v) {
         const double x = parse_real(v);
         if (x < 0.0) throw ValidationError(fmt::format("must be nonnegative, got {}", v));
         c.noise.kernel_cutoff = x;
       }},
      {"noise.kernel_amplitude", [](RunConfig& c, const std::string& v) { c.noise.kernel_amplitude = parse_real(v); }},
      {"noise.kernel_perturbation",
       [](RunConfig& c, const std::string& v) { c.noise.kernel_perturbation = parse_range(v); }},
      {"noise.initial_shape",
       [](RunConfig& c, const std::string& v) {
         c.noise.initial_shape = parse_enum<InitialShape>(
             v, {{"zero", InitialShape::Zero}, {"constant", InitialShape::Constant}, {"bump", InitialShape::Bump}});
       }},
      {"noise.initial_amplitude", [](RunConfig& c, const std::string& v) { c.noise.initial_amplitude = parse_range(v); }},
      {"noise.initial_random_sign",
       [](RunConfig& c, const std::string& v) { c.noise.initial_random_sign = parse_bool(v); }},
      {"noise.initial_center", [](RunConfig& c, const std::string& v) { c.noise.initial_center = parse_point(v); }},
      {"noise.initial_width", [](RunConfig& c, const std::string& v) { c.noise.initial_width = parse_positive(v); }},

      {"solver.method",
       [](RunConfig& c, const std::string& v) {
         c.method = parse_enum<Method>(v, {{"picard", Method::Picard}, {"rk", Method::Rk}});
       }},
      {"solver.T", [](RunConfig& c, const std::string& v) { c.T = parse_positive(v); }},
      {"solver.time_steps", [](RunConfig& c, const std::string& v) { c.picard.time_steps = parse_int_at_least(v, 2); }},
      {"solver.tol", [](RunConfig& c, const std::string& v) { c.picard.tol = parse_positive(v); }},
      {"solver.max_iter", [](RunConfig& c, const std::string& v) { c.picard.max_iter = parse_int_at_least(v, 1); }},
      {"solver.rtol", [](RunConfig& c, const std::string& v) { c.rk.rtol = parse_positive(v); }},
      {"solver.atol", [](RunConfig& c, const std::string& v) { c.rk.atol = parse_positive(v); }},
      {"solver.output_steps", [](RunConfig& c, const std::string& v) { c.rk.output_steps = parse_int_at_least(v, 1); }},

      {"run.space",
       [](RunConfig& c, const std::string& v) { c.space = parse_enum<Space>(v, {{"C", Space::C}, {"L2", Space::L2}}); }},
      {"run.seed", [](RunConfig& c, const std::string& v) { c.seed = parse_u64(v); }},
      {"run.output",
       [](RunConfig& c, const std::string& v) {
         if (v.empty()) throw ValidationError("output directory must not be empty");
         c.output = v;
       }},

      {"uq.samples", [](RunConfig& c, const std::string& v) { c.uq.samples = parse_int_at_least(v, 2); }},
      {"uq.base_seed", [](RunConfig& c, const std::string& v) { c.uq.base_seed = parse_u64(v); }},
      {"uq.p", [](RunConfig& c, const std::string& v) { c.uq.p_list = parse_int_list(v, 1); }},
      {"uq.write_samples", [](RunConfig& c, const std::string& v) { c.uq.write_samples = parse_bool(v); }},

      {"projection.coarse", [](RunConfig& c, const std::string& v) { c.projection.coarse = parse_int_list(v, 2); }},
      {"projection.kind",
       [](RunConfig& c, const std::string& v) {
         if (v == "auto") {
           c.projection.kind.reset();
           return;
         }
         c.projection.kind = parse_enum<ProjectorKind>(
             v, {{"interpolatory", ProjectorKind::Interpolatory}, {"orthogonal", ProjectorKind::Orthogonal}});
       }},
  };
  return table;
}

RunConfig parse_impl(std::istream& in, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::string section;
  std::string raw;
  int lineno = 0;
  bool skipping = false;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(fmt::format("malformed section header '{}'", line), lineno);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      skipping = section == "summary";
      if (!skipping && section != "domain" && section != "noise" && section != "solver" && section != "run" &&
          section != "uq" && section != "projection")
        throw ParseError(fmt::format("unknown section [{}]", section), lineno);
      continue;
    }
    if (skipping) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(fmt::format("expected 'key = value', got '{}'", line), lineno);
    if (section.empty()) throw ParseError("key outside of any [section]", lineno);
    const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));

    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(fmt::format("unknown key '{}'", key), lineno);
    if (const auto prev = seen.find(key); prev != seen.end())
      throw ParseError(fmt::format("duplicate key '{}' (first set on line {})", key, prev->second), lineno);
    seen[key] = lineno;
    try {
      it->second(cfg, value);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("{}: {}", key, e.what()), lineno);
    }
  }

  auto line_of = [&](const std::string& key) {
    const auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  auto fail = [&](const std::string& key, const std::string& msg) { throw ParseError(key + ": " + msg, line_of(key)); };

  const auto& d = cfg.domain;
  if (d.kind == DomainKind::Interval && !(d.a < d.b)) fail("domain.b", fmt::format("need a < b, got [{}, {}]", d.a, d.b));
  if (d.kind == DomainKind::Grid2d) {
    if (!(d.extents.x0 < d.extents.x1)) fail("domain.x1", "need x0 < x1");
    if (!(d.extents.y0 < d.extents.y1)) fail("domain.y1", "need y0 < y1");
  }
  if (d.kind == DomainKind::TriangulatedSurface) {
    if (d.mesh.empty()) fail("domain.mesh", "mesh domains need a mesh file");
    std::filesystem::path mesh(d.mesh);
    if (mesh.is_relative() && !base_dir.empty() && std::filesystem::exists(base_dir / mesh)) mesh = base_dir / mesh;
    if (!std::filesystem::exists(mesh)) fail("domain.mesh", fmt::format("file '{}' does not exist", d.mesh));
    cfg.domain.mesh = mesh.string();
  }
  if (cfg.noise.mode == Mode::Nonlinear && cfg.noise.firing_slope.lo < 0.0)
    fail("noise.firing_slope", "slopes must be nonnegative");
  if (cfg.noise.initial_shape != InitialShape::Zero && !seen.contains("noise.initial_amplitude"))
    fail("noise.initial_shape", "a non-zero initial shape needs noise.initial_amplitude");
  return cfg;
}

std::string fmt_real(double x) { return fmt::format("{:.17g}", x); }
std::string fmt_range(const Range& r) { return fmt::format("{:.17g}, {:.17g}", r.lo, r.hi); }
std::string fmt_point(const Point& p) { return fmt::format("{:.17g}, {:.17g}, {:.17g}", p[0], p[1], p[2]); }

std::string fmt_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot read config file '{}'", path.string()));
  return parse_impl(in, path.parent_path());
}

RunConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_impl(in, {});
}

std::string serialize(const RunConfig& c) {
  std::string s;
  auto kv = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };

  s += "[domain]\n";
  kv("kind", to_string(c.domain.kind));
  kv("a", fmt_real(c.domain.a));
  kv("b", fmt_real(c.domain.b));
  kv("n", std::to_string(c.domain.n));
  kv("x0", fmt_real(c.domain.extents.x0));
  kv("x1", fmt_real(c.domain.extents.x1));
  kv("y0", fmt_real(c.domain.extents.y0));
  kv("y1", fmt_real(c.domain.extents.y1));
  kv("nx", std::to_string(c.domain.nx));
  kv("ny", std::to_string(c.domain.ny));
  if (!c.domain.mesh.empty()) kv("mesh", c.domain.mesh);

  const auto& n = c.noise;
  s += "\n[noise]\n";
  kv("mode", to_string(n.mode));
  kv("firing_max", fmt_range(n.firing_max));
  kv("firing_slope", fmt_range(n.firing_slope));
  kv("firing_threshold", fmt_real(n.firing_threshold));
  kv("forcing_amplitude", fmt_real(n.forcing_amplitude));
  kv("forcing_center", fmt_point(n.forcing_center));
  kv("forcing_width", fmt_point(n.forcing_width));
  kv("forcing_speed", fmt_range(n.forcing_speed));
  kv("kernel_sigma", fmt_real(n.kernel_sigma));
  if (n.kernel_cutoff) kv("kernel_cutoff", fmt_real(*n.kernel_cutoff));
  kv("kernel_amplitude", fmt_real(n.kernel_amplitude));
  kv("kernel_perturbation", fmt_range(n.kernel_perturbation));
  kv("initial_shape", to_string(n.initial_shape));
  kv("initial_amplitude", fmt_range(n.initial_amplitude));
  kv("initial_random_sign", n.initial_random_sign ? "true" : "false");
  kv("initial_center", fmt_point(n.initial_center));
  kv("initial_width", fmt_real(n.initial_width));

  s += "\n[solver]\n";
  kv("method", to_string(c.method));
  kv("T", fmt_real(c.T));
  kv("time_steps", std::to_string(c.picard.time_steps));
  kv("tol", fmt_real(c.picard.tol));
  kv("max_iter", std::to_string(c.picard.max_iter));
  kv("rtol", fmt_real(c.rk.rtol));
  kv("atol", fmt_real(c.rk.atol));
  kv("output_steps", std::to_string(c.rk.output_steps));

  s += "\n[run]\n";
  kv("space", to_string(c.space));
  kv("seed", std::to_string(c.seed));
  kv("output", c.output);

  s += "\n[uq]\n";
  kv("samples", std::to_string(c.uq.samples));
  kv("base_seed", std::to_string(c.uq.base_seed));
  kv("p", fmt_ints(c.uq.p_list));
  kv("write_samples", c.uq.write_samples ? "true" : "false");

  s += "\n[projection]\n";
  kv("coarse", fmt_ints(c.projection.coarse));
  kv("kind", c.projection.kind ? to_string(*c.projection.kind) : "auto");
  return s;
}

}  // namespace nfuq
