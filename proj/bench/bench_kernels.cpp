#include <benchmark/benchmark.h>

#include "nfuq/domain.hpp"
#include "nfuq/kernels.hpp"
#include "nfuq/random_data.hpp"
#include "nfuq/uq.hpp"

using namespace nfuq;

namespace {

struct Problem {
  Domain domain;
  DataRealization real;
  Field u;
};

Problem make_problem(int side) {
  Problem p{build_grid2d({-10.0, 10.0, -10.0, 10.0}, side, side), {}, {}};
  p.real = sample_realization(NoiseSpec{}, p.domain, 1);
  p.u.assign(p.domain.size(), 0.0);
  for (std::size_t i = 0; i < p.u.size(); ++i) p.u[i] = 1.0 / (1.0 + static_cast<double>(i % 17));
  return p;
}

void BM_MatvecSerial(benchmark::State& state) {
  const auto p = make_problem(static_cast<int>(state.range(0)));
  Field out(p.u.size());
  for (auto _ : state) {
    kernels::weighted_matvec_serial(p.real.kernel, p.domain.weights(), p.u, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.u.size() * p.u.size()));
}

void BM_MatvecParallel(benchmark::State& state) {
  const auto p = make_problem(static_cast<int>(state.range(0)));
  Field out(p.u.size());
  for (auto _ : state) {
    kernels::weighted_matvec_parallel(p.real.kernel, p.domain.weights(), p.u, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(p.u.size() * p.u.size()));
}

void BM_RowSumSerial(benchmark::State& state) {
  const auto p = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::max_weighted_row_sum_serial(p.real.kernel, p.domain.weights()));
}

void BM_RowSumParallel(benchmark::State& state) {
  const auto p = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::max_weighted_row_sum_parallel(p.real.kernel, p.domain.weights()));
}

void BM_FrobeniusSerial(benchmark::State& state) {
  const auto p = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_frobenius_serial(p.real.kernel, p.domain.weights()));
}

void BM_FrobeniusParallel(benchmark::State& state) {
  const auto p = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::weighted_frobenius_parallel(p.real.kernel, p.domain.weights()));
}

void BM_MonteCarlo(benchmark::State& state) {
  const auto d = build_interval(0.0, 5.0, 41);
  NoiseSpec spec;
  spec.forcing_center = {2.5, 0.0, 0.0};
  spec.forcing_width = {1.0, 1.0, 1.0};
  UqOptions o;
  o.n_samples = 32;
  o.T = 5.0;
  o.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(spec, d, o).mean_c0);
  state.SetItemsProcessed(state.iterations() * o.n_samples);
}

}  // namespace

BENCHMARK(BM_MatvecSerial)->Arg(21)->Arg(41)->Arg(61);
BENCHMARK(BM_MatvecParallel)->Arg(21)->Arg(41)->Arg(61);
BENCHMARK(BM_RowSumSerial)->Arg(41);
BENCHMARK(BM_RowSumParallel)->Arg(41);
BENCHMARK(BM_FrobeniusSerial)->Arg(41);
BENCHMARK(BM_FrobeniusParallel)->Arg(41);
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
