#include "mstab/kernels.hpp"

namespace mstab::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* m, std::size_t rows, std::size_t cols, std::size_t ld,
                 const double* x, double* y) noexcept {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot_scalar(m + i * ld, x, cols);
}

double sum_squares_scalar(const double* x, std::size_t n) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * x[i];
  return sum;
}

constexpr Table kScalar{Isa::Scalar, dot_scalar, axpy_scalar, gemv_scalar, sum_squares_scalar};

}  // namespace

const Table& scalar_table() noexcept { return kScalar; }

}  // namespace mstab::kernels
