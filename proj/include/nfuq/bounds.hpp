#pragma once

#include <span>
#include <vector>

#include "nfuq/operators.hpp"
#include "nfuq/solver.hpp"

namespace nfuq {

/// A-priori solution bounds and, after check_bounds, how a computed path
/// compares with them.
///
/// Linear:    M(t) = (kv + kg t) e^{kw t},  M0 = M(T),  M1 = kg + (2 + kw) M0.
/// Nonlinear: M = M0 = 2 max(kv, kg + kD kw kf),  M1 = 2 M0 + kg + kD kw kf.
struct BoundsReport {
  Mode mode = Mode::Linear;
  double T = 0.0;
  KappaSet kappas;
  double M0 = 0.0;
  double M1 = 0.0;

  // Filled by check_bounds.
  std::vector<double> times;
  std::vector<double> M_of_t;
  double observed_c0 = 0.0;
  double observed_c1 = 0.0;
  bool pass_pointwise = false;
  bool pass_c0 = false;
  bool pass_c1 = false;
  double margin = 0.0;

  bool all_pass() const noexcept { return pass_pointwise && pass_c0 && pass_c1; }
  /// M(t); constant M0 in the nonlinear case.
  double M(double t) const;
};

/// Relative slack absorbed by the bound checks.
inline constexpr double kBoundSlack = 1e-8;

BoundsReport theoretical_bounds(const KappaSet& kappas, Mode mode, double T);

/// Throws ValidationError if the path does not match the domain or horizon.
BoundsReport check_bounds(const SolutionPath& path, const Domain& domain, const KappaSet& kappas, Mode mode, double T,
                          double slack = kBoundSlack);

/// Per-sample inputs to the L^p regularity estimate.
struct LpSample {
  double c0 = 0.0;
  double c1 = 0.0;
  KappaSet kappas;
};

struct LpEstimate {
  int p = 1;
  double empirical = 0.0;     // (mean c0^p)^(1/p)
  double empirical_c1 = 0.0;  // (mean c1^p)^(1/p)
  double bound = 0.0;
};

/// Empirical L^p(Omega; C^0(J,X)) norm and the a-priori constant with
/// moments estimated from the same samples:
///   linear:    (2^{p-1} e^{T p kw_max} (E kv^p + T^p E kg^p))^{1/p}
///   nonlinear: 2 (|kv|_p + |kg|_p + kD |kw|_p |kf|_p)
/// `kappa_w_max` is the essential bound of kw and is only used when linear.
LpEstimate lp_regularity_estimate(std::span<const LpSample> samples, int p, Mode mode, double T,
                                  double kappa_w_max);

/// Essential supremum of the kernel norm over the perturbation box.
double kappa_w_max(const NoiseSpec& spec, const Domain& domain, Space space);

}  // namespace nfuq
