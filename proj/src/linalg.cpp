#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>

#include "mstab/error.hpp"
#include "mstab/kernels.hpp"
#include "mstab/linalg.hpp"

namespace mstab {

// ---------------------------------------------------------------------------
// Spectral radius of nonnegative matrices

double spectral_radius_nonneg(const Matrix& h) {
  require_square(h, "spectral_radius_nonneg");
  for (double x : h.values())
    if (x < 0.0 || !std::isfinite(x))
      throw DomainError("spectral_radius_nonneg: matrix must be entrywise nonnegative and finite");

  const std::size_t n = h.rows();
  const double hnorm = frobenius_norm(h);
  if (hnorm == 0.0) return 0.0;

  constexpr int kMaxIter = 10000;
  constexpr double kRayleighTol = 1e-12;
  constexpr double kResidualTol = 1e-12;

  Vector x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Vector y(n);
  const auto& k = kernels::active();
  // Rayleigh quotient with the rounding of ||x|| divided out.
  auto step = [&]() {
    k.gemv(h.data(), n, n, n, x.data(), y.data());
    const double ny = std::sqrt(k.sum_squares(y.data(), n));
    const double q = k.dot(x.data(), y.data(), n) / k.sum_squares(x.data(), n);
    if (ny > 0.0)
      for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    return std::pair{ny, q};
  };

  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < kMaxIter; ++it) {
    const auto [ny, next] = step();
    // H^k 1 = 0 for a nonnegative H means H is nilpotent.
    if (ny == 0.0) return 0.0;
    if (it > 0 && std::abs(next - lambda) <= kRayleighTol * std::abs(next)) {
      lambda = next;
      converged = true;
      break;
    }
    lambda = next;
  }

  if (converged) {
    // Polish until the quotient stops moving.
    for (int it = 0; it < 200; ++it) {
      const double next = step().second;
      const bool settled = std::abs(next - lambda) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(next);
      lambda = next;
      if (settled) break;
    }
    k.gemv(h.data(), n, n, n, x.data(), y.data());
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += (y[i] - lambda * x[i]) * (y[i] - lambda * x[i]);
    if (std::sqrt(res) <= kResidualTol * hnorm && lambda >= 0.0) return lambda;
  }
  return spectrum(h).max_abs();
}

// ---------------------------------------------------------------------------
// LU with partial pivoting

namespace {

template <typename T>
struct Lu {
  DenseMatrix<T> lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

template <typename T>
Lu<T> lu_factor(DenseMatrix<T> a) {
  const std::size_t n = a.rows();
  Lu<T> out;
  out.perm.resize(n);
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    double best = std::abs(a(c, c));
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > best) {
        best = std::abs(a(r, c));
        piv = r;
      }
    if (best == 0.0) {
      out.singular = true;
      continue;
    }
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      std::swap(out.perm[c], out.perm[piv]);
      out.sign = -out.sign;
    }
    const T pivot = a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const T f = a(r, c) / pivot;
      a(r, c) = f;
      if (f == T{}) continue;
      if constexpr (std::is_same_v<T, double>) {
        kernels::active().axpy(-f, &a(c, c + 1), &a(r, c + 1), n - c - 1);
      } else {
        for (std::size_t j = c + 1; j < n; ++j) a(r, j) -= f * a(c, j);
      }
    }
  }
  out.lu = std::move(a);
  return out;
}

template <typename T>
std::vector<T> lu_solve(const Lu<T>& f, std::span<const T> b) {
  const std::size_t n = f.lu.rows();
  std::vector<T> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= f.lu(ii, j) * x[j];
    x[ii] /= f.lu(ii, ii);
  }
  return x;
}

template <typename T>
double one_norm(const DenseMatrix<T>& m) {
  double out = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) col += std::abs(m(i, j));
    out = std::max(out, col);
  }
  return out;
}

// Inverse of the factored matrix, column by column.
template <typename T>
DenseMatrix<T> lu_inverse(const Lu<T>& f) {
  const std::size_t n = f.lu.rows();
  DenseMatrix<T> inv(n, n);
  std::vector<T> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), T{});
    e[j] = T{1};
    auto col = lu_solve<T>(f, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

ComplexMatrix shifted_matrix(const Matrix& a, Complex mu) {
  ComplexMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = -a(i, j);
  for (std::size_t i = 0; i < a.rows(); ++i) m(i, i) += mu;
  return m;
}

// Factor (mu I - a) and reject numerically singular shifts.
Lu<Complex> checked_shift_factor(const Matrix& a, Complex mu, ComplexMatrix* inverse_out) {
  require_square(a, "shifted_solve");
  ComplexMatrix m = shifted_matrix(a, mu);
  const double mnorm = one_norm(m);
  auto f = lu_factor(m);
  if (f.singular)
    throw SingularShiftError("shift is an exact eigenvalue (zero pivot)",
                             std::numeric_limits<double>::infinity());
  ComplexMatrix inv = lu_inverse(f);
  const double cond = mnorm * one_norm(inv);
  if (!std::isfinite(cond) || cond >= kSingularShiftCondition)
    throw SingularShiftError("shift (" + std::to_string(mu.real()) + ", " + std::to_string(mu.imag()) +
                                 ") is numerically an eigenvalue; condition estimate " +
                                 std::to_string(cond),
                             cond);
  if (inverse_out) *inverse_out = std::move(inv);
  return f;
}

}  // namespace

CVector shifted_solve(const Matrix& a, Complex mu, std::span<const Complex> rhs) {
  if (rhs.size() != a.rows()) throw DomainError("shifted_solve: rhs length differs from matrix size");
  auto f = checked_shift_factor(a, mu, nullptr);
  return lu_solve<Complex>(f, rhs);
}

ComplexMatrix shifted_inverse(const Matrix& a, Complex mu) {
  ComplexMatrix inv;
  checked_shift_factor(a, mu, &inv);
  return inv;
}

double determinant(const Matrix& m) {
  require_square(m, "determinant");
  auto f = lu_factor(m);
  if (f.singular) return 0.0;
  double det = f.sign;
  for (std::size_t i = 0; i < m.rows(); ++i) det *= f.lu(i, i);
  return det;
}

Vector solve(const Matrix& m, std::span<const double> rhs) {
  require_square(m, "solve");
  if (rhs.size() != m.rows()) throw DomainError("solve: rhs length differs from matrix size");
  auto f = lu_factor(m);
  if (f.singular) throw DomainError("solve: matrix is singular");
  return lu_solve<double>(f, rhs);
}

Matrix inverse(const Matrix& m) {
  require_square(m, "inverse");
  auto f = lu_factor(m);
  if (f.singular) throw DomainError("inverse: matrix is singular");
  return lu_inverse(f);
}

// ---------------------------------------------------------------------------
// Singular values (one-sided Jacobi on the rows of m^T)

SingularSystem singular_decomposition(const Matrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  Matrix g = transpose(m);                 // row j = column j of m
  Matrix vt = Matrix::identity(cols);      // row j = column j of V
  const auto& k = kernels::active();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double* gp = g.row(p).data();
        double* gq = g.row(q).data();
        const double alpha = k.sum_squares(gp, rows);
        const double beta = k.sum_squares(gq, rows);
        const double gamma = k.dot(gp, gq, rows);
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double a = gp[i], b = gq[i];
          gp[i] = c * a - s * b;
          gq[i] = s * a + c * b;
        }
        double* vp = vt.row(p).data();
        double* vq = vt.row(q).data();
        for (std::size_t i = 0; i < cols; ++i) {
          const double a = vp[i], b = vq[i];
          vp[i] = c * a - s * b;
          vq[i] = s * a + c * b;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Vector sigma(cols);
  for (std::size_t j = 0; j < cols; ++j) sigma[j] = std::sqrt(k.sum_squares(g.row(j).data(), rows));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SingularSystem out;
  out.values.resize(cols);
  out.right = Matrix(cols, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    out.values[c] = sigma[order[c]];
    for (std::size_t i = 0; i < cols; ++i) out.right(i, c) = vt(order[c], i);
  }
  return out;
}

std::size_t numerical_rank(const Matrix& m, double tol) {
  if (!(tol > 0.0)) throw DomainError("numerical_rank: tolerance must be positive");
  const auto sv = singular_decomposition(m);
  if (sv.values.empty() || sv.values.front() == 0.0) return 0;
  const double cut = tol * sv.values.front();
  return static_cast<std::size_t>(
      std::count_if(sv.values.begin(), sv.values.end(), [cut](double s) { return s > cut; }));
}

Vector smallest_right_singular_vector(const Matrix& m) {
  const auto sv = singular_decomposition(m);
  const std::size_t c = sv.values.size() - 1;
  Vector v(sv.right.rows());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = sv.right(i, c);
  return v;
}

// ---------------------------------------------------------------------------
// Structure predicates

bool is_normal(const Matrix& m, double tol) {
  require_square(m, "is_normal");
  const Matrix mt = transpose(m);
  const double comm = frobenius_norm(subtract(multiply(m, mt), multiply(mt, m)));
  const double scale = frobenius_norm(m);
  return comm <= tol * scale * scale;
}

bool is_symmetric(const Matrix& m, double tol) {
  if (!m.square()) return false;
  const double bound = tol * std::max(1.0, frobenius_norm(m));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > bound) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Symmetric eigenproblem (cyclic Jacobi)

SymmetricEigen symmetric_eigen(const Matrix& m) {
  require_square(m, "symmetric_eigen");
  const std::size_t n = m.rows();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = m(i, j);
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off == 0.0) break;
    const double fro = frobenius_norm(a);
    if (std::sqrt(off) <= 1e-17 * fro) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = v(i, order[c]);
  }
  return out;
}

}  // namespace mstab
