#pragma once

#include <cstddef>
#include <limits>
#include <span>

#include "mstab/matrix.hpp"

namespace mstab {

// Eigenvalues of a real matrix, repeated by algebraic multiplicity and sorted
// by (real, imag) ascending. Non-real values come in exact conjugate pairs.
struct Spectrum {
  CVector values;

  std::size_t size() const noexcept { return values.size(); }
  double min_real() const;
  // Eigenvalue attaining min_real; between a conjugate pair the one with
  // non-negative imaginary part.
  Complex min_real_witness() const;
  double max_abs() const;
  Complex sum() const;
  Complex product() const;
};

// Imaginary parts with |im| <= kRealSnap * (1 + |lambda|) are set to zero.
inline constexpr double kRealSnap = 1e-9;

// Full spectrum: Householder reduction to Hessenberg form followed by the
// Francis double-shift QR iteration. tol is the deflation threshold relative
// to the neighbouring diagonal entries (floored at machine epsilon). Throws
// ConvergenceError when the 30*n iteration budget runs out.
Spectrum spectrum(const Matrix& m, double tol = std::numeric_limits<double>::epsilon());

// Upper Hessenberg matrix orthogonally similar to m.
Matrix hessenberg(const Matrix& m);

// Spectral radius of an entrywise nonnegative matrix. Power iteration from
// the all-ones vector; falls back to the full spectrum when the iteration
// stalls or its residual is not small (imprimitive or defective cases).
double spectral_radius_nonneg(const Matrix& h);

// max |lambda| over the full spectrum; any real matrix.
double spectral_radius(const Matrix& m);

// Solves (mu I - a) x = rhs by complex LU with partial pivoting. Throws
// SingularShiftError carrying the 1-norm condition number when the shifted
// matrix is numerically singular (condition >= kSingularShiftCondition).
inline constexpr double kSingularShiftCondition = 1e12;
CVector shifted_solve(const Matrix& a, Complex mu, std::span<const Complex> rhs);

// (mu I - a)^{-1}, same checks as shifted_solve.
ComplexMatrix shifted_inverse(const Matrix& a, Complex mu);

double determinant(const Matrix& m);

// Real solve / inverse by LU with partial pivoting; DomainError when singular.
Vector solve(const Matrix& m, std::span<const double> rhs);
Matrix inverse(const Matrix& m);

struct SingularSystem {
  Vector values;  // descending
  Matrix right;   // column k is the right singular vector for values[k]
};

// One-sided Jacobi SVD.
SingularSystem singular_decomposition(const Matrix& m);

// Number of singular values above tol * sigma_max.
std::size_t numerical_rank(const Matrix& m, double tol);

// Unit right singular vector for the smallest singular value.
Vector smallest_right_singular_vector(const Matrix& m);

bool is_normal(const Matrix& m, double tol = 1e-10);
bool is_symmetric(const Matrix& m, double tol);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // column k pairs with values[k]
};

// Cyclic Jacobi; input must be symmetric (only the upper triangle is trusted).
SymmetricEigen symmetric_eigen(const Matrix& m);

// Largest distance between paired elements after greedily matching closest
// pairs first. Infinity when sizes differ.
double spectrum_distance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace mstab
