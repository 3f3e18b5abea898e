#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nfuq {

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Discrete integral-operator kernels. Each has a serial reference and an
// OpenMP row-parallel variant. Every output entry is accumulated in the same
// order by both, so they agree bit for bit.
namespace kernels {

/// out_i = sum_j K_ij q_j u_j
void weighted_matvec_serial(const DenseMatrix& K, std::span<const double> q, std::span<const double> u,
                            std::span<double> out);
void weighted_matvec_parallel(const DenseMatrix& K, std::span<const double> q, std::span<const double> u,
                              std::span<double> out);
/// Dispatches to the parallel variant for large problems when not already
/// inside a parallel region.
void weighted_matvec(const DenseMatrix& K, std::span<const double> q, std::span<const double> u,
                     std::span<double> out);

/// max_i sum_j q_j |K_ij|
double max_weighted_row_sum_serial(const DenseMatrix& K, std::span<const double> q);
double max_weighted_row_sum_parallel(const DenseMatrix& K, std::span<const double> q);

/// sqrt(sum_ij q_i q_j K_ij^2)
double weighted_frobenius_serial(const DenseMatrix& K, std::span<const double> q);
double weighted_frobenius_parallel(const DenseMatrix& K, std::span<const double> q);

/// out = A u
void matvec(const DenseMatrix& A, std::span<const double> u, std::span<double> out);

/// C = A * B
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);

/// Rows at or above this count use the parallel path in weighted_matvec.
inline constexpr std::size_t kParallelThreshold = 256;

}  // namespace kernels
}  // namespace nfuq
