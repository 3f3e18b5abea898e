#include "nfuq/uq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>
#include <omp.h>

#include "nfuq/rng.hpp"

namespace nfuq {

void MomentAccumulator::add(std::span<const double> x) {
  if (count == 0) {
    mean.assign(x.size(), 0.0);
    m2.assign(x.size(), 0.0);
  }
  ++count;
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean[i];
    mean[i] += d * inv;
    m2[i] += d * (x[i] - mean[i]);
  }
}

void MomentAccumulator::merge(const MomentAccumulator& o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(count), nb = static_cast<double>(o.count);
  const double n = na + nb;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double d = o.mean[i] - mean[i];
    mean[i] += d * nb / n;
    m2[i] += o.m2[i] + d * d * na * nb / n;
  }
  count += o.count;
}

Field MomentAccumulator::variance() const {
  Field v(mean.size(), 0.0);
  if (count < 2) return v;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(0.0, m2[i] / static_cast<double>(count - 1));
  return v;
}

int resolve_workers(int requested) {
  int w = requested > 0 ? requested : omp_get_max_threads();
  if (const char* env = std::getenv("NFUQ_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) w = std::min(w, cap);
  }
  return std::max(1, w);
}

SampleResult run_sample(const NoiseSpec& spec, const Domain& domain, const UqOptions& opts, std::size_t index) {
  SampleResult r;
  r.index = index;
  r.seed = derive_seed(opts.base_seed, index);
  try {
    const auto real = sample_realization(spec, domain, r.seed);
    const auto path = solve(real, domain, opts.space, opts.T, opts.solver);
    r.kappas = compute_kappas(real, domain, opts.space, path.times);
    const auto report = check_bounds(path, domain, r.kappas, spec.mode, opts.T);
    r.final_state = path.states.back();
    r.c0 = report.observed_c0;
    r.c1 = report.observed_c1;
    r.bounds_pass = report.all_pass();
    r.bounds_margin = report.margin;
    r.ok = true;
  } catch (const NumericalError& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

namespace {

constexpr std::size_t kChunk = 8;

}  // namespace

UqSummary run_monte_carlo(const NoiseSpec& spec, const Domain& domain, const UqOptions& opts,
                          const SampleSink& sink) {
  if (opts.n_samples < 2) throw ValidationError(fmt::format("uq: need at least 2 samples, got {}", opts.n_samples));
  spec.validate();

  const auto n = static_cast<std::size_t>(opts.n_samples);
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  std::vector<MomentAccumulator> chunks(n_chunks);
  std::vector<SampleResult> results(n);
  const int workers = resolve_workers(opts.workers);

  // ValidationError from a sample is a configuration problem; rethrow it
  // after the parallel region.
  std::string validation_error;

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long c = 0; c < static_cast<long>(n_chunks); ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
    const std::size_t end = std::min(n, begin + kChunk);
    for (std::size_t i = begin; i < end; ++i) {
      try {
        results[i] = run_sample(spec, domain, opts, i);
      } catch (const std::exception& e) {
#pragma omp critical(nfuq_uq_error)
        if (validation_error.empty()) validation_error = e.what();
        continue;
      }
      if (results[i].ok) chunks[c].add(results[i].final_state);
      if (sink) sink(results[i]);
      // only scalars are retained
      Field().swap(results[i].final_state);
    }
  }
  if (!validation_error.empty()) throw ValidationError(validation_error);

  // Fixed pairwise merge tree over chunks.
  for (std::size_t stride = 1; stride < n_chunks; stride *= 2) {
    for (std::size_t i = 0; i + stride < n_chunks; i += 2 * stride) chunks[i].merge(chunks[i + stride]);
  }

  UqSummary s;
  std::size_t passed = 0;
  std::vector<SampleResult> ok;
  for (const auto& r : results) {
    if (r.ok) {
      ok.push_back(r);
      if (r.bounds_pass) ++passed;
    } else {
      s.failed_seeds.push_back(r.seed);
    }
  }
  if (static_cast<double>(s.failed_seeds.size()) > opts.max_failure_fraction * static_cast<double>(n)) {
    const auto first = std::find_if(results.begin(), results.end(), [](const SampleResult& r) { return !r.ok; });
    throw NumericalError(
        fmt::format("uq: {} of {} samples failed (first: {})", s.failed_seeds.size(), n, first->error));
  }
  if (ok.size() < 2) throw NumericalError("uq: fewer than two successful samples");

  s.sample_count = static_cast<int>(ok.size());
  s.mean_final = chunks[0].mean;
  s.var_final = chunks[0].variance();
  s.bound_pass_rate = static_cast<double>(passed) / static_cast<double>(ok.size());

  double sum_c0 = 0.0;
  for (const auto& r : ok) sum_c0 += r.c0;
  s.mean_c0 = sum_c0 / static_cast<double>(ok.size());

  for (const auto& [p, est] : estimate_lp(ok, opts.p_list)) {
    s.lp_norms[p] = est.first;
    s.lp_norms_c1[p] = est.second;
  }
  s.kappa_w_max = spec.mode == Mode::Linear ? kappa_w_max(spec, domain, opts.space) : 0.0;
  std::vector<LpSample> lp(ok.size());
  std::transform(ok.begin(), ok.end(), lp.begin(), [](const SampleResult& r) { return LpSample{r.c0, r.c1, r.kappas}; });
  for (int p : opts.p_list) s.lp_bounds[p] = lp_regularity_estimate(lp, p, spec.mode, opts.T, s.kappa_w_max).bound;

  s.samples = std::move(results);
  return s;
}

std::map<int, std::pair<double, double>> estimate_lp(std::span<const SampleResult> samples,
                                                     std::span<const int> p_list) {
  std::map<int, std::pair<double, double>> out;
  if (samples.empty()) return out;
  for (int p : p_list) {
    if (p < 1) throw ValidationError(fmt::format("estimate_lp: p must be >= 1, got {}", p));
    double s0 = 0.0, s1 = 0.0;
    for (const auto& r : samples) {
      s0 += std::pow(r.c0, p);
      s1 += std::pow(r.c1, p);
    }
    const double n = static_cast<double>(samples.size());
    out[p] = {std::pow(s0 / n, 1.0 / p), std::pow(s1 / n, 1.0 / p)};
  }
  return out;
}

}  // namespace nfuq
