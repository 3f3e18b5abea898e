#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "nfuq/domain.hpp"
#include "nfuq/random_data.hpp"

namespace nfuq::test {

/// Realisation with hand-picked data: kernel K, constant-in-space forcing
/// g(x,t) = c, initial state v.
inline DataRealization make_realization(const Domain& d, Mode mode, DenseMatrix K, std::vector<double> v,
                                        double c = 0.0) {
  DataRealization r;
  r.mode = mode;
  r.kernel = std::move(K);
  r.firing.mode = mode;
  if (mode == Mode::Nonlinear) {
    r.firing.fmax = 1.0;
    r.firing.slope = 4.0;
    r.firing.threshold = 0.5;
  }
  r.forcing.amplitude = c;
  r.forcing.offset.assign(d.size(), 0.0);
  r.forcing.profile.assign(d.size(), 1.0);
  r.initial = std::move(v);
  return r;
}

inline DataRealization constant_realization(const Domain& d, Mode mode, double k, double v, double c) {
  return make_realization(d, mode, DenseMatrix(d.size(), d.size(), k), std::vector<double>(d.size(), v), c);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("nfuq_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Linear spec with a small kernel so e^{kw T} stays moderate.
inline NoiseSpec mild_linear_spec() {
  NoiseSpec s;
  s.mode = Mode::Linear;
  s.kernel_sigma = 0.5;
  s.kernel_cutoff = 1.0;
  s.kernel_amplitude = 0.2;
  s.kernel_perturbation = {0.0, 0.2};
  s.forcing_amplitude = 1.0;
  s.forcing_center = {2.5, 0.0, 0.0};
  s.forcing_width = {1.0, 1.0, 1.0};
  s.forcing_speed = {1.0, 2.0};
  s.initial_shape = InitialShape::Bump;
  s.initial_amplitude = {0.5, 1.5};
  s.initial_center = {1.0, 0.0, 0.0};
  s.initial_width = 0.5;
  return s;
}

/// Default (cortex example) ranges laid out on a 1D interval: the forcing profile is centred
/// on the interval so the pulse reaches it.
inline NoiseSpec interval_cortex_spec() {
  NoiseSpec s = cortex_example_spec();
  s.forcing_center = {2.5, 0.0, 0.0};
  s.forcing_width = {1.0, 1.0, 1.0};
  return s;
}

}  // namespace nfuq::test
