#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nfuq/domain.hpp"
#include "nfuq/kernels.hpp"

namespace nfuq {

/// Linear (f(u) = u) or nonlinear (sigmoidal f) neural field.
enum class Mode { Linear, Nonlinear };

const char* to_string(Mode mode);

/// Closed interval [lo, hi] for a uniform parameter.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool operator==(const Range&) const = default;
};

enum class InitialShape { Zero, Constant, Bump };

const char* to_string(InitialShape shape);

/// Parametric description of the random data (w, f, g, v). Every random
/// scalar is uniform on its range; a degenerate range [c,c] makes it
/// deterministic.
struct NoiseSpec {
  Mode mode = Mode::Nonlinear;

  // f(u) = fmax / (1 + exp(-slope (u - threshold)))
  Range firing_max{0.0, 3.0};
  Range firing_slope{10.0, 15.0};
  double firing_threshold = 0.5;

  // g(x,t) = A sech^2((x2 - y2 + t c)/s2) exp(-(x1-y1)^2/(2 s1^2) - (x3-y3)^2/(2 s3^2))
  double forcing_amplitude = 10.0;
  Point forcing_center{-27.0, 70.0, 43.0};
  Point forcing_width{30.0, 1.0, 30.0};
  Range forcing_speed{1.0, 10.0};

  // k(x,x') = amplitude exp(-|x-x'|^2 / sigma) 1[|x-x'| <= cutoff], plus an
  // independent uniform perturbation on every entry where k != 0.
  double kernel_sigma = 10.0 / 3.0;
  std::optional<double> kernel_cutoff;  // defaults to sqrt(sigma ln 10)
  double kernel_amplitude = 1.0;
  Range kernel_perturbation{0.0, 3.0};

  InitialShape initial_shape = InitialShape::Zero;
  Range initial_amplitude{0.0, 0.0};
  bool initial_random_sign = false;
  Point initial_center{0.0, 0.0, 0.0};
  double initial_width = 1.0;

  double cutoff() const;
  /// Throws ValidationError naming the offending field.
  void validate() const;

  bool operator==(const NoiseSpec&) const = default;
};

/// Independent RNG streams, one per data source.
enum class DataStream : std::uint64_t { Firing = 1, Forcing = 2, Initial = 3, Kernel = 4 };

struct FiringRate {
  Mode mode = Mode::Linear;
  double fmax = 1.0;
  double slope = 1.0;
  double threshold = 0.0;

  double operator()(double u) const noexcept;
  double derivative(double u) const noexcept;
};

/// Travelling pulse restricted to the domain nodes: the spatial Gaussian
/// factor and the sech^2 offset are precomputed per node.
struct Forcing {
  double amplitude = 0.0;
  double speed = 0.0;
  double width2 = 1.0;                // sigma_2
  std::vector<double> offset;         // x2 - y2 (0 when d < 2)
  std::vector<double> profile;        // Gaussian factor in x1, x3

  double operator()(std::size_t node, double t) const noexcept;
  void sample(double t, std::span<double> out) const noexcept;
};

/// One realisation of the random data, evaluated on a fixed domain.
struct DataRealization {
  Mode mode = Mode::Linear;
  /// Realised parameter vector: [fmax, slope] (nonlinear only), speed,
  /// [amplitude, sign] (random initial shapes only), then one entry per
  /// kernel support pair in row-major order.
  std::vector<double> y;
  /// K_ij = w(x_i, x_j); quadrature weights are not folded in.
  DenseMatrix kernel;
  FiringRate firing;
  Forcing forcing;
  std::vector<double> initial;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return initial.size(); }
};

/// k(x_i, x_j) for the deterministic base kernel of `spec`.
DenseMatrix base_kernel(const NoiseSpec& spec, const Domain& domain);

DataRealization sample_realization(const NoiseSpec& spec, const Domain& domain, std::uint64_t seed);

/// Entrywise majorant of |w| over every realisation of the kernel
/// perturbation: max(|k + lo|, |k + hi|) on the support of k.
DenseMatrix kernel_majorant(const NoiseSpec& spec, const Domain& domain);

double eval_forcing(const DataRealization& real, std::size_t node, double t);
double eval_firing(const DataRealization& real, double u);
double eval_firing_deriv(const DataRealization& real, double u);

/// Data of the Monte Carlo example on the cortex: sigma_w = 10/3,
/// rho = sqrt(sigma_w ln 10), W*, f* in [0,3], mu* in [10,15], c* in [1,10],
/// h = 0.5, A = 10, y = (-27, 70, 43), sigma = (30, 1, 30), v = 0.
NoiseSpec cortex_example_spec();

}  // namespace nfuq
