#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "mstab/linalg.hpp"
#include "mstab/matrix.hpp"

#ifdef MSTAB_HAVE_EIGEN
#include <Eigen/Eigenvalues>
#endif

namespace testing {

using mstab::Complex;
using mstab::CVector;
using mstab::Matrix;
using mstab::Vector;

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * double(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + std::size_t(rng() % (hi - lo + 1));
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

// Nonnegative with roughly `density` nonzeros.
inline Matrix random_nonneg(std::mt19937_64& rng, std::size_t n, double density = 0.6, double scale = 1.0) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (uniform(rng) < density) m(i, j) = scale * uniform(rng);
  return m;
}

// Nonnegative and irreducible: a random cyclic permutation is added.
inline Matrix random_irreducible(std::mt19937_64& rng, std::size_t n, double density = 0.4) {
  Matrix m = random_nonneg(rng, n, density);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 0; k < n; ++k) m(order[k], order[(k + 1) % n]) += 0.2 + uniform(rng);
  return m;
}

inline Matrix random_symmetric_nonneg(std::mt19937_64& rng, std::size_t n, double density = 0.6) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (uniform(rng) < density) m(i, j) = m(j, i) = uniform(rng);
  return m;
}

inline Matrix random_symmetric_irreducible(std::mt19937_64& rng, std::size_t n, double density = 0.4) {
  Matrix m = random_symmetric_nonneg(rng, n, density);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x = 0.2 + uniform(rng);
    m(i, i + 1) += x;
    m(i + 1, i) += x;
  }
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  Vector v(n);
  for (double& x : v) x = uniform(rng, lo, hi);
  return v;
}

inline CVector sorted(CVector v) {
  std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

#ifdef MSTAB_HAVE_EIGEN
// Independent eigenvalue oracle.
inline CVector eigen_spectrum(const Matrix& m) {
  const auto n = Eigen::Index(m.rows());
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) e(i, j) = m(std::size_t(i), std::size_t(j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(e, false);
  CVector out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(solver.eigenvalues()(i));
  return sorted(out);
}
#endif

}  // namespace testing
