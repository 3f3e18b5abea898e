#include "nfuq/app.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "nfuq/bounds.hpp"
#include "nfuq/errors.hpp"
#include "nfuq/io.hpp"
#include "nfuq/projection.hpp"
#include "nfuq/rng.hpp"
#include "nfuq/uq.hpp"

#ifndef NFUQ_VERSION
#define NFUQ_VERSION "unknown"
#endif

namespace nfuq {

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.out) c.output = *o.out;
  if (o.seed) {
    c.seed = *o.seed;
    c.uq.base_seed = *o.seed;
  }
  if (o.samples) {
    if (*o.samples < 2) throw ValidationError(fmt::format("--samples must be >= 2, got {}", *o.samples));
    c.uq.samples = *o.samples;
  }
  if (o.mode) c.noise.mode = *o.mode;
  if (o.space) c.space = *o.space;
  if (o.solver) c.method = *o.solver;
}

namespace {

using Entries = SummaryEntries;

void add_kappas(Entries& e, const std::string& prefix, const KappaSet& k) {
  e.emplace_back(prefix + "kappa_w", format_real(k.w));
  e.emplace_back(prefix + "kappa_f", format_real(k.f));
  e.emplace_back(prefix + "kappa_fprime", format_real(k.fprime));
  e.emplace_back(prefix + "kappa_g", format_real(k.g));
  e.emplace_back(prefix + "kappa_v", format_real(k.v));
  e.emplace_back(prefix + "kappa_D", format_real(k.D));
  e.emplace_back(prefix + "kappa_N", format_real(k.N));
}

void add_report(Entries& e, const std::string& prefix, const BoundsReport& r) {
  e.emplace_back(prefix + "M0", format_real(r.M0));
  e.emplace_back(prefix + "M1", format_real(r.M1));
  e.emplace_back(prefix + "observed_c0", format_real(r.observed_c0));
  e.emplace_back(prefix + "observed_c1", format_real(r.observed_c1));
  e.emplace_back(prefix + "pass_pointwise", r.pass_pointwise ? "true" : "false");
  e.emplace_back(prefix + "pass_c0", r.pass_c0 ? "true" : "false");
  e.emplace_back(prefix + "pass_c1", r.pass_c1 ? "true" : "false");
}

Entries header(const std::string& subcommand) {
  return {{"version", NFUQ_VERSION}, {"subcommand", subcommand}};
}

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i) s += (i ? ", " : "") + std::to_string(seeds[i]);
  return s;
}

int cmd_solve(const RunConfig& c, const Domain& domain, std::ostream& log) {
  const std::filesystem::path out(c.output);
  const auto real = sample_realization(c.noise, domain, c.seed);
  Entries e = header("solve");
  e.emplace_back("seed", std::to_string(c.seed));

  SolutionPath path;
  if (c.method == Method::Picard) {
    auto [p, trace] = picard_solve(real, domain, c.space, c.T, c.picard);
    path = std::move(p);
    std::string csv = "iteration,diff,envelope\n";
    for (std::size_t k = 0; k < trace.iterate_diffs.size(); ++k)
      csv += fmt::format("{},{:.17g},{:.17g}\n", k + 1, trace.iterate_diffs[k], trace.theoretical_envelope[k]);
    std::filesystem::create_directories(out);
    std::ofstream(out / "picard_trace.csv", std::ios::binary | std::ios::trunc) << csv;
    e.emplace_back("picard_iterations", std::to_string(trace.iterations));
    e.emplace_back("picard_B", format_real(trace.B));
  } else {
    path = rk_solve(real, domain, c.space, c.T, c.rk);
  }

  const auto kappas = compute_kappas(real, domain, c.space, path.times);
  const auto report = check_bounds(path, domain, kappas, c.noise.mode, c.T);
  write_time_series(out / "solution", domain, path);
  write_field_csv(out / "final.csv", domain, path.states.back());

  add_kappas(e, "", kappas);
  add_report(e, "", report);
  e.emplace_back("voc_residual", format_real(voc_residual(path, real, domain)));
  write_summary(out / "summary.txt", c, e);

  log << fmt::format("solve: {} steps, |u|_C0 = {:.6g} (M0 = {:.6g}), bounds {}\n", path.steps(),
                     report.observed_c0, report.M0, report.all_pass() ? "pass" : "FAIL");
  return report.all_pass() ? kExitOk : kExitBoundFailure;
}

UqOptions uq_options(const RunConfig& c, std::uint64_t base_seed) {
  UqOptions o;
  o.n_samples = c.uq.samples;
  o.base_seed = base_seed;
  o.T = c.T;
  o.space = c.space;
  o.solver = c.solver_options();
  o.p_list = c.uq.p_list;
  return o;
}

std::string sample_table(const UqSummary& s, const RunConfig& c) {
  std::string csv = "index,seed,ok,c0,c1,M0,M1,pass,margin\n";
  for (const auto& r : s.samples) {
    const auto b = theoretical_bounds(r.kappas, c.noise.mode, c.T);
    csv += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g}\n", r.index, r.seed, r.ok ? 1 : 0, r.c0,
                       r.c1, r.ok ? b.M0 : 0.0, r.ok ? b.M1 : 0.0, r.bounds_pass ? 1 : 0, r.bounds_margin);
  }
  return csv;
}

int cmd_bounds(const RunConfig& c, const Domain& domain, std::ostream& log) {
  const std::filesystem::path out(c.output);
  const auto summary = run_monte_carlo(c.noise, domain, uq_options(c, c.seed));
  std::filesystem::create_directories(out);
  std::ofstream(out / "bounds.csv", std::ios::binary | std::ios::trunc) << sample_table(summary, c);

  Entries e = header("bounds");
  e.emplace_back("base_seed", std::to_string(c.seed));
  e.emplace_back("sample_count", std::to_string(summary.sample_count));
  e.emplace_back("pass_rate", format_real(summary.bound_pass_rate));
  e.emplace_back("failed_seeds", join_seeds(summary.failed_seeds));
  write_summary(out / "summary.txt", c, e);

  log << fmt::format("bounds: {} realisations on {} workers, pass rate {}\n", summary.sample_count,
                     resolve_workers(0), summary.bound_pass_rate);
  return summary.bound_pass_rate == 1.0 ? kExitOk : kExitBoundFailure;
}

int cmd_uq(const RunConfig& c, const Domain& domain, std::ostream& log) {
  const std::filesystem::path out(c.output);
  SampleSink sink;
  if (c.uq.write_samples) {
    std::filesystem::create_directories(out / "samples");
    sink = [&](const SampleResult& r) {
      if (r.ok) write_field_csv(out / "samples" / fmt::format("sample_{:05d}.csv", r.index), domain, r.final_state);
    };
  }
  const auto s = run_monte_carlo(c.noise, domain, uq_options(c, c.uq.base_seed), sink);

  write_field_csv(out / "mean.csv", domain, s.mean_final);
  write_field_csv(out / "var.csv", domain, s.var_final);
  std::ofstream(out / "samples.csv", std::ios::binary | std::ios::trunc) << sample_table(s, c);

  Entries e = header("uq");
  e.emplace_back("base_seed", std::to_string(c.uq.base_seed));
  e.emplace_back("sample_count", std::to_string(s.sample_count));
  e.emplace_back("mean_c0", format_real(s.mean_c0));
  for (const auto& [p, v] : s.lp_norms) e.emplace_back(fmt::format("lp_c0.{}", p), format_real(v));
  for (const auto& [p, v] : s.lp_norms_c1) e.emplace_back(fmt::format("lp_c1.{}", p), format_real(v));
  for (const auto& [p, v] : s.lp_bounds) e.emplace_back(fmt::format("lp_bound.{}", p), format_real(v));
  if (c.noise.mode == Mode::Linear) e.emplace_back("kappa_w_max", format_real(s.kappa_w_max));
  e.emplace_back("bound_pass_rate", format_real(s.bound_pass_rate));
  e.emplace_back("failed_seeds", join_seeds(s.failed_seeds));
  write_summary(out / "summary.txt", c, e);

  double vmax = 0.0;
  for (double v : s.var_final) vmax = std::max(vmax, v);
  log << fmt::format("uq: {} samples on {} workers, max variance {:.6g}, bound pass rate {}\n", s.sample_count,
                     resolve_workers(0), vmax, s.bound_pass_rate);
  bool lp_ok = true;
  for (const auto& [p, v] : s.lp_norms) lp_ok = lp_ok && v <= s.lp_bounds.at(p) * (1.0 + kBoundSlack);
  return s.bound_pass_rate == 1.0 && lp_ok ? kExitOk : kExitBoundFailure;
}

int cmd_project(const RunConfig& c, const Domain& domain, std::ostream& log) {
  const std::filesystem::path out(c.output);
  const auto real = sample_realization(c.noise, domain, c.seed);
  const auto times = uniform_grid(c.T, c.method == Method::Picard ? c.picard.time_steps : c.rk.output_steps);
  const auto full = compute_kappas(real, domain, c.space, times);
  const ProjectorKind kind = c.projection.kind.value_or(natural_projector(c.space));

  Entries e = header("project");
  e.emplace_back("seed", std::to_string(c.seed));
  e.emplace_back("projector", to_string(kind));
  add_kappas(e, "", full);
  bool ok = true;
  for (int n : c.projection.coarse) {
    const auto P = build_projector(kind, domain, n);
    const auto sol = solve_projected(P, real, c.space, c.T, c.solver_options());
    const double norm = P.norm(c.space);
    const bool kernel_ok = sol.kappas.w <= norm * full.w * (1.0 + kBoundSlack);
    const std::string prefix = fmt::format("n{}.", n);
    e.emplace_back(prefix + "projector_norm", format_real(norm));
    add_kappas(e, prefix, sol.kappas);
    add_report(e, prefix, sol.report);
    e.emplace_back(prefix + "pass_kernel_norm", kernel_ok ? "true" : "false");
    write_field_csv(out / fmt::format("projected_{}.csv", n), domain, sol.path.states.back());
    ok = ok && kernel_ok && sol.report.all_pass();
    log << fmt::format("project: n = {}, |P| = {:.6g}, kappa_w {:.6g} <= {:.6g}, bounds {}\n", n, norm,
                       sol.kappas.w, norm * full.w, sol.report.all_pass() ? "pass" : "FAIL");
  }
  write_summary(out / "summary.txt", c, e);
  return ok ? kExitOk : kExitBoundFailure;
}

// Quick end-to-end checks with closed-form answers.
int cmd_selftest(const RunConfig& c, std::ostream& log) {
  const std::filesystem::path out(c.output);
  Entries e = header("selftest");
  bool all = true;
  auto record = [&](const std::string& name, bool pass, double value) {
    log << fmt::format("selftest {}: {} ({:.3e})\n", name, pass ? "PASS" : "FAIL", value);
    e.emplace_back(name, pass ? "pass" : "fail");
    all = all && pass;
  };

  const auto domain = build_interval(0.0, 1.0, 11);
  NoiseSpec spec;
  spec.mode = Mode::Linear;
  spec.kernel_amplitude = 0.0;
  spec.forcing_amplitude = 0.0;
  spec.initial_shape = InitialShape::Constant;
  spec.initial_amplitude = {1.0, 1.0};
  const auto real = sample_realization(spec, domain, 0);

  auto decay_error = [&](const SolutionPath& p) {
    double err = 0.0;
    for (std::size_t k = 0; k < p.steps(); ++k)
      for (double u : p.states[k]) err = std::max(err, std::abs(u - std::exp(-p.times[k])));
    return err;
  };
  const double rk_err = decay_error(rk_solve(real, domain, Space::C, 5.0));
  record("rk_decay", rk_err < 1e-5, rk_err);
  const double picard_err = decay_error(picard_solve(real, domain, Space::C, 5.0).first);
  record("picard_decay", picard_err < 5e-4, picard_err);

  const auto fig = cortex_example_spec();
  const auto d2 = build_interval(0.0, 5.0, 21);
  int passed = 0;
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto r = sample_realization(fig, d2, derive_seed(c.seed, i));
    const auto p = rk_solve(r, d2, Space::C, 5.0);
    if (check_bounds(p, d2, compute_kappas(r, d2, Space::C, p.times), fig.mode, 5.0).all_pass()) ++passed;
  }
  record("bounds", passed == 5, 5 - passed);

  write_summary(out / "summary.txt", c, e);
  return all ? kExitOk : kExitBoundFailure;
}

nlohmann::json error_record(const std::string& subcommand, int code, const std::string& kind, const std::string& msg,
                            int line) {
  nlohmann::json j = {{"status", "error"},
                      {"subcommand", subcommand},
                      {"exit_code", code},
                      {"kind", kind},
                      {"message", msg}};
  if (line > 0) j["line"] = line;
  return j;
}

}  // namespace

int run(const std::string& subcommand, const RunConfig& config, std::ostream& log) {
  if (subcommand == "selftest") return cmd_selftest(config, log);
  if (subcommand != "solve" && subcommand != "bounds" && subcommand != "uq" && subcommand != "project")
    throw ValidationError(fmt::format("unknown subcommand '{}'", subcommand));
  config.noise.validate();
  const Domain domain = config.build_domain();
  if (subcommand == "solve") return cmd_solve(config, domain, log);
  if (subcommand == "bounds") return cmd_bounds(config, domain, log);
  if (subcommand == "uq") return cmd_uq(config, domain, log);
  return cmd_project(config, domain, log);
}

int run_cli(const std::string& subcommand, const std::optional<std::filesystem::path>& config_path,
            const Overrides& overrides, std::ostream& log, std::ostream& err) {
  std::optional<std::string> out_dir = overrides.out;
  int code = kExitOk;
  std::string kind, message;
  int line = 0;
  try {
    RunConfig config = config_path ? parse_config(*config_path) : RunConfig{};
    apply_overrides(config, overrides);
    out_dir = config.output;
    return run(subcommand, config, log);
  } catch (const ParseError& e) {
    code = kExitValidation;
    kind = "parse";
    message = e.what();
    line = e.line();
  } catch (const ValidationError& e) {
    code = kExitValidation;
    kind = "validation";
    message = e.what();
  } catch (const NumericalError& e) {
    code = kExitNumerical;
    kind = "numerical";
    message = e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    code = kExitValidation;
    kind = "io";
    message = e.what();
  }
  const auto record = error_record(subcommand, code, kind, message, line).dump();
  err << record << "\n";
  if (out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*out_dir, ec);
    if (!ec) std::ofstream(std::filesystem::path(*out_dir) / "error.json", std::ios::trunc) << record << "\n";
  }
  return code;
}

}  // namespace nfuq
