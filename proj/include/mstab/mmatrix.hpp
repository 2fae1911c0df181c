#pragma once

#include <cstddef>
#include <optional>

#include "mstab/linalg.hpp"
#include "mstab/matrix.hpp"
#include "mstab/tolerances.hpp"

namespace mstab {

// A = rho(H) I - H for entrywise nonnegative H, with the structure the
// stability results depend on. Immutable after build().
struct SingularMMatrix {
  Matrix h;
  double rho = 0.0;
  Matrix a;
  bool irreducible = false;
  std::size_t geo_mult_zero = 0;
  std::size_t alg_mult_zero = 0;
  Spectrum spectrum_a;
  // Present iff geo_mult_zero == 1. Unit norm, largest entry positive,
  // numerical noise in [-1e-12, 0) clamped to zero.
  std::optional<Vector> z_left;   // z_left^T A = 0
  std::optional<Vector> z_right;  // A z_right = 0

  std::size_t size() const noexcept { return h.rows(); }
  bool geometrically_simple() const noexcept { return geo_mult_zero == 1; }
};

// DomainError if H has a negative or non-finite entry or is not square.
SingularMMatrix build_mmatrix(const Matrix& h, const Tolerances& tol = {});

// Strong connectivity of the digraph i -> j for h_ij > 0 (exact zero test).
// A 1x1 matrix counts as irreducible.
bool is_irreducible(const Matrix& h);

// m_ii = |b_ii|, m_ij = -|b_ij|.
Matrix comparison_matrix(const Matrix& b);

// Off-diagonal <= tol and, writing M = gamma I - P with gamma the largest
// diagonal entry, gamma > rho(P) + tol * ||M||.
bool is_nonsingular_m_matrix(const Matrix& m, double tol = 1e-9);

// comparison_matrix(b) is a nonsingular M-matrix and every b_ii > 0.
bool is_h_matrix_positive_diagonal(const Matrix& b, double tol = 1e-9);

// Normalizes a numerical null vector into Perron form (see SingularMMatrix).
Vector perron_normalize(Vector z);

}  // namespace mstab
