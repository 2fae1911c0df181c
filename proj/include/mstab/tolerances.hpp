#pragma once

#include <limits>

namespace mstab {

// Every numerical threshold in one place. Relative values are multiplied by
// the Frobenius norm of the matrix under test unless noted.
struct Tolerances {
  // Deflation threshold of the QR iteration (backward error / ||M||).
  double eig = std::numeric_limits<double>::epsilon();
  // Stability band: |min Re| <= margin * ||M|| is reported as marginal.
  double margin = 1e-9;
  // Singular values below rank * sigma_max count as zero.
  double rank = 1e-9;
  // Eigenvalues of A with |lambda| <= alg_window * ||A|| count toward the
  // algebraic multiplicity of zero.
  double alg_window = 1e-7;
  // Per-factor NZP threshold: |z_l^T v| > nzp * ||v|| * ||z_l||.
  double nzp = 1e-9;
  // |a_ij - a_ji| <= symmetric * max(1, ||A||).
  double symmetric = 1e-10;
  // Clause (ii): ||A v|| <= eigvec * ||A|| * ||v||.
  double eigvec = 1e-9;
};

}  // namespace mstab
