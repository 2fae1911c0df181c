#pragma once

#include <optional>

#include "mstab/mmatrix.hpp"

namespace mstab {

// B = A + v w^T together with the quantities the stability criteria read.
struct RankOneSystem {
  SingularMMatrix base;
  Vector v;
  Vector w;
  Matrix b;
  // (z_l^T v)(w^T z_r) != 0 per-factor test; false when Perron vectors are absent.
  bool nzp = false;
  std::optional<double> left_projection;   // z_l^T v
  std::optional<double> right_projection;  // w^T z_r
  bool symmetric_base = false;
  // Populated when A is symmetric and zero is geometrically simple.
  std::optional<double> alpha;  // |<v,z><w,z>| / (||v|| ||w|| ||z||^2), needs v, w != 0
  std::optional<double> tau;    // smallest nonzero eigenvalue of A

  std::size_t size() const noexcept { return v.size(); }
};

RankOneSystem assemble(const SingularMMatrix& base, const Vector& v, const Vector& w,
                       const Tolerances& tol = {});

// HypothesisError when zero is not a geometrically simple eigenvalue of A.
bool nzp(const RankOneSystem& sys);

// w^T (mu I - A)^{-1} v - 1. SingularShiftError when mu is numerically in sigma(A).
Complex secular_residual(const RankOneSystem& sys, Complex mu);

// (mu I - B)^{-1} assembled from (mu I - A)^{-1}:
//   R + (R v)(w^T R) / (1 - w^T R v),  R = (mu I - A)^{-1}.
// SingularShiftError when mu is in sigma(A) or |1 - w^T R v| <= 1e-8
// (mu is then an eigenvalue of B).
ComplexMatrix sherman_morrison_resolvent(const RankOneSystem& sys, Complex mu);

// Same system with v scaled by t (the homotopy A + t v w^T).
RankOneSystem with_scaled_v(const RankOneSystem& sys, double t);

}  // namespace mstab
