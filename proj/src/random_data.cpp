#include "nfuq/random_data.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "nfuq/errors.hpp"
#include "nfuq/rng.hpp"

namespace nfuq {

const char* to_string(Mode mode) { return mode == Mode::Linear ? "linear" : "nonlinear"; }

const char* to_string(InitialShape shape) {
  switch (shape) {
    case InitialShape::Zero: return "zero";
    case InitialShape::Constant: return "constant";
    case InitialShape::Bump: return "bump";
  }
  return "?";
}

double NoiseSpec::cutoff() const {
  return kernel_cutoff ? *kernel_cutoff : std::sqrt(kernel_sigma * std::log(10.0));
}

namespace {

void check_range(const Range& r, const char* name) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi))
    throw ValidationError(fmt::format("{}: range bounds must be finite", name));
  if (r.lo > r.hi) throw ValidationError(fmt::format("{}: lower bound {} exceeds upper bound {}", name, r.lo, r.hi));
}

void check_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(fmt::format("{}: must be positive, got {}", name, x));
}

}  // namespace

void NoiseSpec::validate() const {
  if (mode == Mode::Nonlinear) {
    check_range(firing_max, "firing_max");
    check_range(firing_slope, "firing_slope");
    if (!std::isfinite(firing_threshold)) throw ValidationError("firing_threshold: must be finite");
  }
  if (!std::isfinite(forcing_amplitude)) throw ValidationError("forcing_amplitude: must be finite");
  for (int k = 0; k < 3; ++k) check_positive(forcing_width[k], "forcing_width");
  check_range(forcing_speed, "forcing_speed");
  check_positive(kernel_sigma, "kernel_sigma");
  if (kernel_cutoff && (!(*kernel_cutoff >= 0.0) || !std::isfinite(*kernel_cutoff)))
    throw ValidationError(fmt::format("kernel_cutoff: must be nonnegative, got {}", *kernel_cutoff));
  if (!std::isfinite(kernel_amplitude)) throw ValidationError("kernel_amplitude: must be finite");
  check_range(kernel_perturbation, "kernel_perturbation");
  check_range(initial_amplitude, "initial_amplitude");
  if (initial_shape == InitialShape::Bump) check_positive(initial_width, "initial_width");
}

double FiringRate::operator()(double u) const noexcept {
  if (mode == Mode::Linear) return u;
  const double z = slope * (u - threshold);
  if (z > 700.0) return fmax;
  if (z < -700.0) return 0.0;
  return fmax / (1.0 + std::exp(-z));
}

double FiringRate::derivative(double u) const noexcept {
  if (mode == Mode::Linear) return 1.0;
  const double z = slope * (u - threshold);
  if (std::abs(z) > 700.0) return 0.0;
  const double e = std::exp(-std::abs(z));  // symmetric in z
  return fmax * slope * e / ((1.0 + e) * (1.0 + e));
}

double Forcing::operator()(std::size_t node, double t) const noexcept {
  if (amplitude == 0.0) return 0.0;
  const double c = std::cosh((offset[node] + t * speed) / width2);
  return amplitude * profile[node] / (c * c);
}

void Forcing::sample(double t, std::span<double> out) const noexcept {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(i, t);
}

DenseMatrix base_kernel(const NoiseSpec& spec, const Domain& domain) {
  const std::size_t n = domain.size();
  const double rho = spec.cutoff();
  DenseMatrix k(n, n);
  if (spec.kernel_amplitude == 0.0) return k;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = euclidean_distance(domain.node(i), domain.node(j));
      if (r <= rho) k(i, j) = spec.kernel_amplitude * std::exp(-r * r / spec.kernel_sigma);
    }
  }
  return k;
}

DenseMatrix kernel_majorant(const NoiseSpec& spec, const Domain& domain) {
  DenseMatrix k = base_kernel(spec, domain);
  const auto [lo, hi] = spec.kernel_perturbation;
  for (std::size_t i = 0; i < k.rows(); ++i) {
    for (double& e : k.row(i)) {
      if (e != 0.0) e = std::max(std::abs(e + lo), std::abs(e + hi));
    }
  }
  return k;
}

DataRealization sample_realization(const NoiseSpec& spec, const Domain& domain, std::uint64_t seed) {
  spec.validate();
  const std::size_t n = domain.size();
  DataRealization real;
  real.mode = spec.mode;
  real.seed = seed;

  const CounterRng firing_rng(seed, static_cast<std::uint64_t>(DataStream::Firing));
  const CounterRng forcing_rng(seed, static_cast<std::uint64_t>(DataStream::Forcing));
  const CounterRng initial_rng(seed, static_cast<std::uint64_t>(DataStream::Initial));
  const CounterRng kernel_rng(seed, static_cast<std::uint64_t>(DataStream::Kernel));

  real.firing.mode = spec.mode;
  if (spec.mode == Mode::Nonlinear) {
    real.firing.fmax = firing_rng.uniform(0, spec.firing_max.lo, spec.firing_max.hi);
    real.firing.slope = firing_rng.uniform(1, spec.firing_slope.lo, spec.firing_slope.hi);
    real.firing.threshold = spec.firing_threshold;
    real.y.push_back(real.firing.fmax);
    real.y.push_back(real.firing.slope);
  }

  auto& g = real.forcing;
  g.amplitude = spec.forcing_amplitude;
  g.speed = forcing_rng.uniform(0, spec.forcing_speed.lo, spec.forcing_speed.hi);
  g.width2 = spec.forcing_width[1];
  g.offset.resize(n);
  g.profile.resize(n);
  real.y.push_back(g.speed);
  const int d = domain.dim();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& x = domain.node(i);
    // Coordinates beyond the domain dimension sit at the pulse centre.
    const double d1 = x[0] - spec.forcing_center[0];
    const double d3 = d >= 3 ? x[2] - spec.forcing_center[2] : 0.0;
    g.offset[i] = d >= 2 ? x[1] - spec.forcing_center[1] : 0.0;
    const double s1 = spec.forcing_width[0], s3 = spec.forcing_width[2];
    g.profile[i] = std::exp(-d1 * d1 / (2.0 * s1 * s1) - d3 * d3 / (2.0 * s3 * s3));
  }

  real.initial.assign(n, 0.0);
  if (spec.initial_shape != InitialShape::Zero) {
    double amp = initial_rng.uniform(0, spec.initial_amplitude.lo, spec.initial_amplitude.hi);
    real.y.push_back(amp);
    if (spec.initial_random_sign) {
      const double sign = (initial_rng.bits(1) & 1U) ? 1.0 : -1.0;
      real.y.push_back(sign);
      amp *= sign;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (spec.initial_shape == InitialShape::Constant) {
        real.initial[i] = amp;
      } else {
        const double r = euclidean_distance(domain.node(i), spec.initial_center);
        real.initial[i] = amp * std::exp(-r * r / (2.0 * spec.initial_width * spec.initial_width));
      }
    }
  }

  real.kernel = base_kernel(spec, domain);
  const auto [wlo, whi] = spec.kernel_perturbation;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = real.kernel.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] == 0.0) continue;
      // Counter = flat entry index, independent of the support pattern.
      const double pert = kernel_rng.uniform(i * n + j, wlo, whi);
      row[j] += pert;
      real.y.push_back(pert);
    }
  }
  return real;
}

double eval_forcing(const DataRealization& real, std::size_t node, double t) { return real.forcing(node, t); }
double eval_firing(const DataRealization& real, double u) { return real.firing(u); }
double eval_firing_deriv(const DataRealization& real, double u) { return real.firing.derivative(u); }

NoiseSpec cortex_example_spec() { return NoiseSpec{}; }

}  // namespace nfuq
