#include <atomic>
#include <cmath>
#include <random>

#include <catch_amalgamated.hpp>

#include "nfuq/domain.hpp"
#include "nfuq/errors.hpp"
#include "nfuq/rng.hpp"
#include "nfuq/uq.hpp"
#include "support.hpp"

using namespace nfuq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

NoiseSpec random_sign_spec() {
  NoiseSpec s;
  s.mode = Mode::Linear;
  s.kernel_amplitude = 0.0;
  s.forcing_amplitude = 0.0;
  s.initial_shape = InitialShape::Constant;
  s.initial_amplitude = {1.0, 1.0};
  s.initial_random_sign = true;
  return s;
}

}  // namespace

TEST_CASE("moment accumulator matches two-pass formulas") {
  std::mt19937_64 gen(51);
  std::normal_distribution<double> N(3.0, 2.0);
  std::vector<std::vector<double>> xs(37, std::vector<double>(4));
  for (auto& x : xs)
    for (double& e : x) e = N(gen);
  MomentAccumulator all, left, right;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    all.add(xs[k]);
    (k < 20 ? left : right).add(xs[k]);
  }
  left.merge(right);
  for (std::size_t i = 0; i < 4; ++i) {
    double mean = 0.0, ss = 0.0;
    for (auto& x : xs) mean += x[i];
    mean /= xs.size();
    for (auto& x : xs) ss += (x[i] - mean) * (x[i] - mean);
    CHECK_THAT(all.mean[i], WithinRel(mean, 1e-13));
    CHECK_THAT(all.variance()[i], WithinRel(ss / (xs.size() - 1), 1e-12));
    CHECK_THAT(left.mean[i], WithinRel(mean, 1e-13));
    CHECK_THAT(left.variance()[i], WithinRel(ss / (xs.size() - 1), 1e-12));
  }
}

TEST_CASE("degenerate spec has zero variance") {
  const auto d = build_interval(0.0, 5.0, 21);
  NoiseSpec s = test::interval_cortex_spec();
  s.firing_max = {2.0, 2.0};
  s.firing_slope = {12.0, 12.0};
  s.forcing_speed = {3.0, 3.0};
  s.kernel_perturbation = {1.0, 1.0};
  UqOptions o;
  o.n_samples = 20;
  o.T = 3.0;
  const auto sum = run_monte_carlo(s, d, o);
  const auto single = solve(sample_realization(s, d, 0), d, Space::C, 3.0, o.solver).states.back();
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(std::abs(sum.var_final[i]) <= 1e-12);
    CHECK_THAT(sum.mean_final[i], WithinAbs(single[i], 1e-12));
  }
  CHECK(sum.bound_pass_rate == 1.0);
  CHECK(sum.failed_seeds.empty());
}

TEST_CASE("random sign closed form") {
  const auto d = build_interval(0.0, 1.0, 5);
  UqOptions o;
  o.n_samples = 1000;
  o.T = 1.0;
  o.base_seed = 17;
  const auto s = run_monte_carlo(random_sign_spec(), d, o);
  const double v = std::exp(-2.0 * o.T);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(std::abs(s.mean_final[i]) <= 3.0 * std::sqrt(v / 1000));
    CHECK(std::abs(s.var_final[i] - v) <= 5.0 * std::sqrt(2.0 / 999) * v);
  }
  for (const auto& [p, est] : s.lp_norms) CHECK_THAT(est, WithinAbs(1.0, 1e-12));
}

TEST_CASE("mean estimate is unbiased across meta-trials") {
  const auto d = build_interval(0.0, 1.0, 3);
  UqOptions o;
  o.n_samples = 50;
  o.T = 0.5;
  int ok = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    o.base_seed = 1000 + trial;
    const auto s = run_monte_carlo(random_sign_spec(), d, o);
    bool all = true;
    for (std::size_t i = 0; i < d.size(); ++i)
      all = all && std::abs(s.mean_final[i]) <= 4.0 * std::sqrt(s.var_final[i] / o.n_samples);
    ok += all;
  }
  CHECK(ok >= 99);
}

TEST_CASE("cortex-style sweep passes every bound") {
  const auto d = build_interval(0.0, 5.0, 41);
  UqOptions o;
  o.n_samples = 100;
  o.T = 10.0;
  const auto s = run_monte_carlo(test::interval_cortex_spec(), d, o);
  CHECK(s.sample_count == 100);
  CHECK(s.bound_pass_rate == 1.0);
  for (double v : s.var_final) CHECK(v >= 0.0);
  double prev = 0.0;
  for (const auto& [p, est] : s.lp_norms) {
    CHECK(est >= prev);
    CHECK(est <= s.lp_bounds.at(p));
    prev = est;
  }
}

TEST_CASE("results do not depend on worker count") {
  const auto d = build_interval(0.0, 5.0, 21);
  UqOptions o;
  o.n_samples = 37;
  o.T = 2.0;
  o.workers = 1;
  const auto a = run_monte_carlo(test::interval_cortex_spec(), d, o);
  o.workers = 4;
  std::atomic<int> calls{0};
  const auto b = run_monte_carlo(test::interval_cortex_spec(), d, o, [&](const SampleResult& r) {
    CHECK(r.final_state.size() == d.size());
    ++calls;
  });
  CHECK(calls == 37);
  CHECK(a.mean_final == b.mean_final);
  CHECK(a.var_final == b.var_final);
  CHECK(a.lp_norms == b.lp_norms);
  CHECK(a.lp_bounds == b.lp_bounds);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].seed == b.samples[i].seed);
    CHECK(a.samples[i].c0 == b.samples[i].c0);
    CHECK(a.samples[i].c1 == b.samples[i].c1);
  }
}

TEST_CASE("sample seeds follow derive_seed") {
  const auto d = build_interval(0.0, 1.0, 5);
  UqOptions o;
  o.n_samples = 5;
  o.base_seed = 99;
  o.T = 0.5;
  const auto s = run_monte_carlo(random_sign_spec(), d, o);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(s.samples[i].index == i);
    CHECK(s.samples[i].seed == derive_seed(99, i));
  }
}

TEST_CASE("failures are recorded and too many abort") {
  const auto d = build_interval(0.0, 5.0, 11);
  UqOptions o;
  o.n_samples = 10;
  o.T = 5.0;
  o.solver.method = Method::Picard;
  o.solver.picard.max_iter = 2;
  CHECK_THROWS_AS(run_monte_carlo(test::interval_cortex_spec(), d, o), NumericalError);
  o.max_failure_fraction = 1.0;
  NoiseSpec s = test::interval_cortex_spec();
  CHECK_THROWS_AS(run_monte_carlo(s, d, o), NumericalError);  // fewer than two successes

  UqOptions bad;
  bad.n_samples = 1;
  CHECK_THROWS_AS(run_monte_carlo(s, d, bad), ValidationError);
}

TEST_CASE("Lp estimates") {
  SampleResult one;
  one.c0 = 2.5;
  one.c1 = 4.0;
  const int ps[] = {1, 2, 4};
  for (const auto& [p, est] : estimate_lp(std::span(&one, 1), ps)) {
    CHECK_THAT(est.first, WithinRel(2.5, 1e-15));
    CHECK_THAT(est.second, WithinRel(4.0, 1e-15));
  }
  std::mt19937_64 gen(52);
  std::uniform_real_distribution<double> U(0.0, 5.0);
  std::vector<SampleResult> many(50);
  for (auto& r : many) r.c0 = r.c1 = U(gen);
  const auto est = estimate_lp(many, ps);
  CHECK(est.at(1).first <= est.at(2).first);
  CHECK(est.at(2).first <= est.at(4).first);
}
