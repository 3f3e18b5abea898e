#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nfuq/domain.hpp"
#include "nfuq/errors.hpp"
#include "nfuq/operators.hpp"
#include "nfuq/random_data.hpp"

namespace nfuq {

/// Time grid x node values of u(t) and u'(t) = N(t, u(t)).
struct SolutionPath {
  Space space = Space::C;
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<Field> derivs;

  std::size_t steps() const noexcept { return times.size(); }
  /// max_k ||u(t_k)||
  double c0_norm(const Domain& domain) const;
  /// c0_norm + max_k ||u'(t_k)||
  double c1_norm(const Domain& domain) const;
};

/// Successive Picard iterate differences next to the factorial envelope
/// B kappa_N^(k-1) T^k / k!.
struct PicardTrace {
  std::vector<double> iterate_diffs;
  std::vector<double> theoretical_envelope;
  int iterations = 0;
  bool converged = false;
  double B = 0.0;
  double kappa_N = 0.0;
  /// Number of consecutive time windows the iteration ran on.
  int windows = 1;
};

/// Thrown when Picard iteration stalls; carries the trace for diagnosis.
class PicardDivergence : public NumericalError {
 public:
  PicardDivergence(const std::string& what, PicardTrace trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const PicardTrace& trace() const noexcept { return trace_; }

 private:
  PicardTrace trace_;
};

/// u' = rhs(t, u) written into `out`.
using Rhs = std::function<void(double t, std::span<const double> u, std::span<double> out)>;

struct PicardOptions {
  int time_steps = 200;
  double tol = 1e-10;
  int max_iter = 200;
  /// First iterate: the initial datum v (default) or zero.
  bool start_from_zero = false;
  /// Largest kappa_N times window length. Longer horizons are split into
  /// consecutive windows, each restarted from the previous end state.
  double window_lipschitz = 10.0;

  bool operator==(const PicardOptions&) const = default;
};

struct RkOptions {
  double rtol = 1e-6;
  double atol = 1e-9;
  int output_steps = 200;
  double safety = 0.9;
  double min_factor = 0.2;
  double max_factor = 5.0;
  /// Initial step as a fraction of T.
  double initial_step = 0.01;
  /// Largest step as a fraction of the output spacing; bounds the Hermite
  /// interpolation error.
  double max_step_per_output = 1.0;

  bool operator==(const RkOptions&) const = default;
};

enum class Method { Picard, Rk };

const char* to_string(Method method);

struct SolverOptions {
  Method method = Method::Rk;
  PicardOptions picard;
  RkOptions rk;
};

/// Picard iteration y_{k+1}(t) = v + int_0^t rhs(s, y_k(s)) ds on a uniform
/// grid with cumulative trapezoid quadrature. `kappas` give the Lipschitz
/// constant and growth bound behind the envelope recorded in the trace; with
/// several windows the trace holds the per-iteration maximum over windows.
std::pair<SolutionPath, PicardTrace> picard_integrate(const Rhs& rhs, std::span<const double> v, const Domain& domain,
                                                      Space space, double T, const PicardOptions& opts,
                                                      const KappaSet& kappas, Mode mode);

/// Dormand-Prince 5(4) with embedded error control; states are mapped onto
/// a uniform output grid by cubic Hermite interpolation.
SolutionPath rk_integrate(const Rhs& rhs, std::span<const double> v, const Domain& domain, Space space, double T,
                          const RkOptions& opts);

std::pair<SolutionPath, PicardTrace> picard_solve(const DataRealization& real, const Domain& domain, Space space,
                                                  double T, const PicardOptions& opts = {});

SolutionPath rk_solve(const DataRealization& real, const Domain& domain, Space space, double T,
                      const RkOptions& opts = {});

SolutionPath solve(const DataRealization& real, const Domain& domain, Space space, double T,
                   const SolverOptions& opts);

/// max_k ||u(t_k) - e^{-t_k} v - int_0^{t_k} e^{-(t_k-s)} (W F(u(s)) + g(s)) ds||
/// with the integral by trapezoid on the path grid.
double voc_residual(const SolutionPath& path, const DataRealization& real, const Domain& domain);

}  // namespace nfuq
