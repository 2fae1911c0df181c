#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mstab/mmatrix.hpp"

namespace mstab {

enum class MinorClass { P, P0NotP, NotP0 };

const char* minor_class_name(MinorClass c) noexcept;

struct MinorReport {
  std::size_t n = 0;
  // Every nonempty sorted index subset with its determinant, ordered by
  // cardinality and then lexicographically.
  std::vector<std::pair<std::vector<std::size_t>, double>> minors;
  double min_minor = 0.0;
  double tolerance = 0.0;
  MinorClass classification = MinorClass::NotP0;
};

inline constexpr std::size_t kMinorGuard = 22;

// All 2^n - 1 principal minors by LU. Sign band 1e-10 * max(1, ||M||_F^n).
// SizeError above kMinorGuard.
MinorReport principal_minors(const Matrix& m);

// B = A + v w^T is P or P0 for v, w >= 0. HypothesisError on a negative
// entry; TheoryViolation when B is not P0.
bool verify_p0_theorem(const SingularMMatrix& base, const Vector& v, const Vector& w);

// B is P for irreducible A, v, w >= 0 and NZP. HypothesisError when a
// hypothesis is unmet; TheoryViolation when B is not P.
bool verify_p_theorem(const SingularMMatrix& base, const Vector& v, const Vector& w);

}  // namespace mstab
