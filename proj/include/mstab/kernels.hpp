#pragma once

// Dense BLAS-1/2 style inner loops used by the factorizations, the power
// iteration and the ODE integrator. Every kernel has a scalar reference
// implementation; vector variants (AVX2+FMA on x86-64, NEON on AArch64) are
// selected at runtime when the CPU supports them. Variants reassociate sums,
// so results agree with the scalar path to rounding, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mstab::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

struct Table {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n) noexcept;
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n) noexcept;
  // y = M x for a row-major rows x cols block with leading dimension ld
  void (*gemv)(const double* m, std::size_t rows, std::size_t cols, std::size_t ld,
               const double* x, double* y) noexcept;
  // sum_i x[i]^2
  double (*sum_squares)(const double* x, std::size_t n) noexcept;
};

const Table& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the running CPU lacks it.
const Table* avx2_table() noexcept;
const Table* neon_table() noexcept;

const Table* table_for(Isa isa) noexcept;

// Variants usable on this machine, scalar first.
std::vector<Isa> available() noexcept;

// The table every library routine calls through. Defaults to the widest
// available variant.
const Table& active() noexcept;

// Returns false (and leaves the selection unchanged) if isa is unavailable.
bool select(Isa isa) noexcept;

// Restores the previous selection on scope exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) noexcept;
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;
  bool ok() const noexcept { return ok_; }

 private:
  const Table* previous_;
  bool ok_;
};

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum_squares(std::span<const double> x) noexcept {
  return active().sum_squares(x.data(), x.size());
}

}  // namespace mstab::kernels
