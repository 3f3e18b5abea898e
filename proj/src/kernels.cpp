#include "nfuq/kernels.hpp"

#include <cmath>

#include <omp.h>

namespace nfuq::kernels {

namespace {

inline double row_dot(std::span<const double> row, std::span<const double> q, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * (q[j] * u[j]);
  return s;
}

inline double row_abs(std::span<const double> row, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += q[j] * std::abs(row[j]);
  return s;
}

inline double row_sq(std::span<const double> row, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += q[j] * row[j] * row[j];
  return s;
}

}  // namespace

void weighted_matvec_serial(const DenseMatrix& K, std::span<const double> q, std::span<const double> u,
                            std::span<double> out) {
  for (std::size_t i = 0; i < K.rows(); ++i) out[i] = row_dot(K.row(i), q, u);
}

void weighted_matvec_parallel(const DenseMatrix& K, std::span<const double> q, std::span<const double> u,
                              std::span<double> out) {
  const auto n = static_cast<long>(K.rows());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = row_dot(K.row(i), q, u);
}

void weighted_matvec(const DenseMatrix& K, std::span<const double> q, std::span<const double> u,
                     std::span<double> out) {
  if (K.rows() >= kParallelThreshold && !omp_in_parallel() && omp_get_max_threads() > 1)
    weighted_matvec_parallel(K, q, u, out);
  else
    weighted_matvec_serial(K, q, u, out);
}

double max_weighted_row_sum_serial(const DenseMatrix& K, std::span<const double> q) {
  double m = 0.0;
  for (std::size_t i = 0; i < K.rows(); ++i) m = std::max(m, row_abs(K.row(i), q));
  return m;
}

double max_weighted_row_sum_parallel(const DenseMatrix& K, std::span<const double> q) {
  const auto n = static_cast<long>(K.rows());
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (long i = 0; i < n; ++i) m = std::max(m, row_abs(K.row(i), q));
  return m;
}

// The outer sum runs over per-row partials in row order in both variants.
double weighted_frobenius_serial(const DenseMatrix& K, std::span<const double> q) {
  double s = 0.0;
  for (std::size_t i = 0; i < K.rows(); ++i) s += q[i] * row_sq(K.row(i), q);
  return std::sqrt(s);
}

double weighted_frobenius_parallel(const DenseMatrix& K, std::span<const double> q) {
  const auto n = static_cast<long>(K.rows());
  std::vector<double> partial(K.rows());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) partial[i] = q[i] * row_sq(K.row(i), q);
  double s = 0.0;
  for (double p : partial) s += p;
  return std::sqrt(s);
}

void matvec(const DenseMatrix& A, std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const auto row = A.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * u[j];
    out[i] = s;
  }
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  DenseMatrix C(A.rows(), B.cols());
  const auto n = static_cast<long>(A.rows());
#pragma omp parallel for schedule(static) if (A.rows() >= kParallelThreshold && !omp_in_parallel())
  for (long i = 0; i < n; ++i) {
    auto crow = C.row(i);
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const double a = A(i, k);
      if (a == 0.0) continue;
      const auto brow = B.row(k);
      for (std::size_t j = 0; j < B.cols(); ++j) crow[j] += a * brow[j];
    }
  }
  return C;
}

}  // namespace nfuq::kernels
