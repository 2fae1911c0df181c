// AArch64 only; NEON is architecturally guaranteed there.

#include "kernels_internal.hpp"

#include <arm_neon.h>

namespace mstab::kernels::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) noexcept {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) noexcept {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_neon(const double* m, std::size_t rows, std::size_t cols, std::size_t ld,
               const double* x, double* y) noexcept {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_neon(m + r * ld, x, cols);
}

double sum_squares_neon(const double* x, std::size_t n) noexcept { return dot_neon(x, x, n); }

constexpr Table kNeon{Isa::Neon, dot_neon, axpy_neon, gemv_neon, sum_squares_neon};

}  // namespace

const Table& neon_impl() noexcept { return kNeon; }

}  // namespace mstab::kernels::detail
