#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nfuq/bounds.hpp"
#include "nfuq/domain.hpp"
#include "nfuq/random_data.hpp"
#include "nfuq/solver.hpp"

namespace nfuq {

struct UqOptions {
  int n_samples = 100;
  std::uint64_t base_seed = 0;
  double T = 10.0;
  Space space = Space::C;
  SolverOptions solver;
  std::vector<int> p_list{1, 2, 4};
  /// 0 picks the OpenMP default; NFUQ_THREADS caps either way.
  int workers = 0;
  /// Fraction of failed solves above which the run aborts.
  double max_failure_fraction = 0.1;
};

/// Outcome of one Monte Carlo sample.
struct SampleResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  Field final_state;
  double c0 = 0.0;
  double c1 = 0.0;
  KappaSet kappas;
  bool bounds_pass = false;
  double bounds_margin = 0.0;
};

struct UqSummary {
  int sample_count = 0;  // successful samples
  Field mean_final;
  /// Unbiased (n-1) sample variance of u(., T).
  Field var_final;
  double mean_c0 = 0.0;
  std::map<int, double> lp_norms;     // p -> (mean c0^p)^(1/p)
  std::map<int, double> lp_norms_c1;  // p -> (mean c1^p)^(1/p)
  std::map<int, double> lp_bounds;    // p -> a-priori constant
  double kappa_w_max = 0.0;
  double bound_pass_rate = 0.0;
  std::vector<std::uint64_t> failed_seeds;
  /// Per-sample scalars in sample order (final states are not retained).
  std::vector<SampleResult> samples;
};

/// Receives each finished sample, possibly from several threads at once.
using SampleSink = std::function<void(const SampleResult&)>;

/// Number of workers after applying the NFUQ_THREADS cap.
int resolve_workers(int requested);

/// Solves and bound-checks one realisation.
SampleResult run_sample(const NoiseSpec& spec, const Domain& domain, const UqOptions& opts, std::size_t index);

/// Monte Carlo forward propagation. Sample i uses derive_seed(base_seed, i).
/// Moments are accumulated per fixed-size chunk and merged along a fixed
/// pairwise tree, so the summary does not depend on worker count or
/// completion order.
UqSummary run_monte_carlo(const NoiseSpec& spec, const Domain& domain, const UqOptions& opts,
                          const SampleSink& sink = {});

/// (n^-1 sum c0_i^p)^(1/p) and the C^1 analogue for each p.
std::map<int, std::pair<double, double>> estimate_lp(std::span<const SampleResult> samples,
                                                     std::span<const int> p_list);

/// Streaming mean / sum of squared deviations.
struct MomentAccumulator {
  std::size_t count = 0;
  Field mean;
  Field m2;

  void add(std::span<const double> x);
  void merge(const MomentAccumulator& other);
  Field variance() const;  // divisor count - 1
};

}  // namespace nfuq
