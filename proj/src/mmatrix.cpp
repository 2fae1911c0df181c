#include "mstab/mmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mstab/error.hpp"

namespace mstab {

namespace {

void require_nonnegative(const Matrix& h, const char* what) {
  require_square(h, what);
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j)
      if (!(h(i, j) >= 0.0) || !std::isfinite(h(i, j)))
        throw DomainError(std::string(what) + ": H must be entrywise nonnegative; entry (" +
                          std::to_string(i + 1) + "," + std::to_string(j + 1) + ") = " +
                          std::to_string(h(i, j)));
}

std::size_t reach_count(const Matrix& h, bool transposed) {
  const std::size_t n = h.rows();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      const double e = transposed ? h(j, i) : h(i, j);
      if (e > 0.0 && !seen[j]) {
        seen[j] = true;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count;
}

}  // namespace

bool is_irreducible(const Matrix& h) {
  require_square(h, "is_irreducible");
  const std::size_t n = h.rows();
  if (n == 1) return true;
  return reach_count(h, false) == n && reach_count(h, true) == n;
}

Vector perron_normalize(Vector z) {
  const double nz = norm2(z);
  if (nz == 0.0) return z;
  std::size_t big = 0;
  for (std::size_t i = 1; i < z.size(); ++i)
    if (std::abs(z[i]) > std::abs(z[big])) big = i;
  const double s = (z[big] < 0.0 ? -1.0 : 1.0) / nz;
  for (double& x : z) {
    x *= s;
    if (x < 0.0 && x >= -1e-12) x = 0.0;
  }
  return z;
}

SingularMMatrix build_mmatrix(const Matrix& h, const Tolerances& tol) {
  require_nonnegative(h, "build_mmatrix");
  const std::size_t n = h.rows();

  SingularMMatrix out;
  out.h = h;
  out.rho = spectral_radius_nonneg(h);
  out.a = scaled(h, -1.0);
  for (std::size_t i = 0; i < n; ++i) out.a(i, i) += out.rho;
  out.irreducible = is_irreducible(h);

  out.geo_mult_zero = n - numerical_rank(out.a, tol.rank);
  out.spectrum_a = spectrum(out.a, tol.eig);
  const double window = tol.alg_window * frobenius_norm(out.a);
  out.alg_mult_zero = static_cast<std::size_t>(std::count_if(
      out.spectrum_a.values.begin(), out.spectrum_a.values.end(),
      [window](const Complex& c) { return std::abs(c) <= window; }));

  if (out.geo_mult_zero == 1) {
    out.z_right = perron_normalize(smallest_right_singular_vector(out.a));
    out.z_left = perron_normalize(smallest_right_singular_vector(transpose(out.a)));
  }
  return out;
}

Matrix comparison_matrix(const Matrix& b) {
  require_square(b, "comparison_matrix");
  Matrix m(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) = (i == j) ? std::abs(b(i, j)) : -std::abs(b(i, j));
  return m;
}

bool is_nonsingular_m_matrix(const Matrix& m, double tol) {
  require_square(m, "is_nonsingular_m_matrix");
  const std::size_t n = m.rows();
  double gamma = m(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    gamma = std::max(gamma, m(i, i));
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m(i, j) > tol) return false;
  }
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = std::max(0.0, (i == j ? gamma : 0.0) - m(i, j));
  return gamma > spectral_radius_nonneg(p) + tol * frobenius_norm(m);
}

bool is_h_matrix_positive_diagonal(const Matrix& b, double tol) {
  require_square(b, "is_h_matrix_positive_diagonal");
  for (std::size_t i = 0; i < b.rows(); ++i)
    if (!(b(i, i) > 0.0)) return false;
  return is_nonsingular_m_matrix(comparison_matrix(b), tol);
}

}  // namespace mstab
