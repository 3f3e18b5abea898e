#include <cmath>
#include <random>

#include <catch_amalgamated.hpp>

#include "nfuq/kernels.hpp"

using namespace nfuq;

namespace {

DenseMatrix random_matrix(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  DenseMatrix K(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (double& x : K.row(i)) x = U(gen);
  return K;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& gen, double lo = -1.0) {
  std::uniform_real_distribution<double> U(lo, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = U(gen);
  return v;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
  std::mt19937_64 gen(1);
  for (std::size_t n : {1u, 7u, 300u, 513u}) {
    const auto K = random_matrix(n, gen);
    const auto q = random_vector(n, gen, 0.1);
    const auto u = random_vector(n, gen);
    std::vector<double> a(n), b(n), c(n);
    kernels::weighted_matvec_serial(K, q, u, a);
    kernels::weighted_matvec_parallel(K, q, u, b);
    kernels::weighted_matvec(K, q, u, c);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(kernels::max_weighted_row_sum_serial(K, q) == kernels::max_weighted_row_sum_parallel(K, q));
    CHECK(kernels::weighted_frobenius_serial(K, q) == kernels::weighted_frobenius_parallel(K, q));
  }
}

TEST_CASE("kernels match naive formulas") {
  std::mt19937_64 gen(2);
  const std::size_t n = 40;
  const auto K = random_matrix(n, gen);
  const auto q = random_vector(n, gen, 0.1);
  const auto u = random_vector(n, gen);
  std::vector<double> out(n);
  kernels::weighted_matvec_serial(K, q, u, out);
  double rowmax = 0.0, frob = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    long double s = 0.0L, r = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      s += static_cast<long double>(K(i, j)) * q[j] * u[j];
      r += std::abs(K(i, j)) * q[j];
      frob += q[i] * q[j] * K(i, j) * K(i, j);
    }
    CHECK(std::abs(out[i] - static_cast<double>(s)) < 1e-13);
    rowmax = std::max(rowmax, static_cast<double>(r));
  }
  CHECK(std::abs(kernels::max_weighted_row_sum_serial(K, q) - rowmax) < 1e-13);
  CHECK(std::abs(kernels::weighted_frobenius_serial(K, q) - std::sqrt(frob)) < 1e-13);
}

TEST_CASE("matvec and matmul") {
  std::mt19937_64 gen(3);
  const auto A = random_matrix(30, gen);
  const auto B = random_matrix(30, gen);
  const auto x = random_vector(30, gen);
  std::vector<double> bx(30), abx(30), cx(30);
  kernels::matvec(B, x, bx);
  kernels::matvec(A, bx, abx);
  kernels::matvec(kernels::matmul(A, B), x, cx);
  for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(abx[i] - cx[i]) < 1e-12);
}
