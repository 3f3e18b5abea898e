#pragma once

#include <span>
#include <vector>

#include "nfuq/domain.hpp"
#include "nfuq/random_data.hpp"

namespace nfuq {

/// Phase space: C(D) with the sup norm, or L2(D) with the quadrature norm.
enum class Space { C, L2 };

const char* to_string(Space space);

/// Node values of a function on the domain.
using Field = std::vector<double>;

double field_norm(const Domain& domain, Space space, std::span<const double> u);

/// Realisation magnitudes of the input data and the derived constants.
struct KappaSet {
  double w = 0.0;       // kernel norm
  double f = 0.0;       // sup |f|           (nonlinear only)
  double fprime = 0.0;  // sup |f'|          (nonlinear only)
  double g = 0.0;       // max_t |g(t)|
  double v = 0.0;       // |v|
  double D = 1.0;       // max(1, sqrt|D|)
  double N = 1.0;       // Lipschitz constant of the vector field
};

double domain_factor(const Domain& domain);
double lipschitz_constant(const KappaSet& k, Mode mode);

/// ||K||_W: C -> max_i sum_j q_j |K_ij|, L2 -> sqrt(sum_ij q_i q_j K_ij^2).
double kernel_norm(const DenseMatrix& kernel, const Domain& domain, Space space);
double kernel_norm(const DataRealization& real, const Domain& domain, Space space);

/// (W u)_i = sum_j q_j K_ij u_j
Field apply_kernel(const DataRealization& real, const Domain& domain, std::span<const double> u);

/// Pointwise firing rate F(u)
Field apply_firing(const DataRealization& real, std::span<const double> u);

/// N(t,u) = -u + W F(u) + g(t). Reusable evaluator holding scratch storage;
/// one instance per thread.
class VectorField {
 public:
  VectorField(const DataRealization& real, const Domain& domain);
  void operator()(double t, std::span<const double> u, std::span<double> out);
  std::size_t size() const noexcept { return scratch_.size(); }

 private:
  const DataRealization& real_;
  const Domain& domain_;
  Field scratch_;
};

Field vector_field(const DataRealization& real, const Domain& domain, double t, std::span<const double> u);

/// B_N(nu): linear (1 + kw) nu + kg, nonlinear nu + kw kD kf + kg.
double growth_bound(const KappaSet& kappas, double unorm, Mode mode);

/// kappa_g is the maximum over `times` of ||g(t)||.
KappaSet compute_kappas(const DataRealization& real, const Domain& domain, Space space,
                        std::span<const double> times);

/// Uniform grid {0, T/steps, ..., T}.
std::vector<double> uniform_grid(double T, int steps);

}  // namespace nfuq
