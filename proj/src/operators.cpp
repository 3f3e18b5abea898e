#include "nfuq/operators.hpp"

#include <algorithm>
#include <cmath>

#include "nfuq/kernels.hpp"

namespace nfuq {

const char* to_string(Space space) { return space == Space::C ? "C" : "L2"; }

double field_norm(const Domain& domain, Space space, std::span<const double> u) {
  if (space == Space::C) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
  }
  const auto& q = domain.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += q[i] * u[i] * u[i];
  return std::sqrt(s);
}

double domain_factor(const Domain& domain) { return std::max(1.0, std::sqrt(domain.measure())); }

double lipschitz_constant(const KappaSet& k, Mode mode) {
  return mode == Mode::Linear ? 1.0 + k.w : 1.0 + k.D * k.w * k.fprime;
}

double kernel_norm(const DenseMatrix& kernel, const Domain& domain, Space space) {
  const auto& q = domain.weights();
  const bool big = kernel.rows() >= kernels::kParallelThreshold;
  if (space == Space::C)
    return big ? kernels::max_weighted_row_sum_parallel(kernel, q) : kernels::max_weighted_row_sum_serial(kernel, q);
  return big ? kernels::weighted_frobenius_parallel(kernel, q) : kernels::weighted_frobenius_serial(kernel, q);
}

double kernel_norm(const DataRealization& real, const Domain& domain, Space space) {
  return kernel_norm(real.kernel, domain, space);
}

Field apply_kernel(const DataRealization& real, const Domain& domain, std::span<const double> u) {
  Field out(u.size());
  kernels::weighted_matvec(real.kernel, domain.weights(), u, out);
  return out;
}

Field apply_firing(const DataRealization& real, std::span<const double> u) {
  Field out(u.size());
  std::transform(u.begin(), u.end(), out.begin(), [&](double x) { return real.firing(x); });
  return out;
}

VectorField::VectorField(const DataRealization& real, const Domain& domain)
    : real_(real), domain_(domain), scratch_(domain.size()) {}

void VectorField::operator()(double t, std::span<const double> u, std::span<double> out) {
  const std::size_t n = u.size();
  if (real_.mode == Mode::Linear) {
    kernels::weighted_matvec(real_.kernel, domain_.weights(), u, out);
  } else {
    for (std::size_t i = 0; i < n; ++i) scratch_[i] = real_.firing(u[i]);
    kernels::weighted_matvec(real_.kernel, domain_.weights(), scratch_, out);
  }
  for (std::size_t i = 0; i < n; ++i) out[i] += real_.forcing(i, t) - u[i];
}

Field vector_field(const DataRealization& real, const Domain& domain, double t, std::span<const double> u) {
  VectorField N(real, domain);
  Field out(u.size());
  N(t, u, out);
  return out;
}

double growth_bound(const KappaSet& k, double unorm, Mode mode) {
  if (mode == Mode::Linear) return (1.0 + k.w) * unorm + k.g;
  return unorm + k.w * k.D * k.f + k.g;
}

KappaSet compute_kappas(const DataRealization& real, const Domain& domain, Space space,
                        std::span<const double> times) {
  KappaSet k;
  k.w = kernel_norm(real, domain, space);
  if (real.mode == Mode::Nonlinear) {
    // closed-form sigmoid suprema
    k.f = std::abs(real.firing.fmax);
    k.fprime = std::abs(real.firing.fmax * real.firing.slope) / 4.0;
  }
  Field g(domain.size());
  for (double t : times) {
    real.forcing.sample(t, g);
    k.g = std::max(k.g, field_norm(domain, space, g));
  }
  k.v = field_norm(domain, space, real.initial);
  k.D = domain_factor(domain);
  k.N = lipschitz_constant(k, real.mode);
  return k;
}

std::vector<double> uniform_grid(double T, int steps) {
  std::vector<double> t(steps + 1);
  for (int k = 0; k <= steps; ++k) t[k] = (k == steps) ? T : T * static_cast<double>(k) / steps;
  return t;
}

}  // namespace nfuq
