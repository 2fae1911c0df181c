#include "mstab/matrix.hpp"

#include <cmath>
#include <string>

#include "mstab/error.hpp"
#include "mstab/kernels.hpp"

namespace mstab {

void require_square(const Matrix& m, const char* what) {
  if (!m.square() || m.rows() == 0)
    throw DomainError(std::string(what) + ": expected a non-empty square matrix, got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DomainError("multiply: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i).data();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double aip = a(i, p);
      if (aip != 0.0) k.axpy(aip, b.row(p).data(), ci, b.cols());
    }
  }
  return c;
}

Vector multiply(const Matrix& m, std::span<const double> x) {
  if (m.cols() != x.size()) throw DomainError("multiply: vector length differs from column count");
  Vector y(m.rows());
  kernels::active().gemv(m.data(), m.rows(), m.cols(), m.cols(), x.data(), y.data());
  return y;
}

Vector multiply_transposed(const Matrix& m, std::span<const double> x) {
  if (m.rows() != x.size()) throw DomainError("multiply_transposed: vector length differs from row count");
  Vector y(m.cols(), 0.0);
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (x[i] != 0.0) k.axpy(x[i], m.row(i).data(), y.data(), m.cols());
  return y;
}

ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DomainError("multiply: inner dimensions differ");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const Complex aip = a(i, p);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aip * b(p, j);
    }
  return c;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("add: shapes differ");
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("subtract: shapes differ");
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

Matrix scaled(const Matrix& m, double s) {
  Matrix c = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double& x : c.row(i)) x *= s;
  return c;
}

Matrix outer(std::span<const double> v, std::span<const double> w) {
  Matrix m(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * w[j];
  return m;
}

Matrix diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix to_complex(const Matrix& m) {
  ComplexMatrix c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j);
  return c;
}

Matrix to_real_checked(const ComplexMatrix& m) {
  Matrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).real();
  return r;
}

double frobenius_norm(const Matrix& m) {
  return std::sqrt(kernels::active().sum_squares(m.data(), m.rows() * m.cols()));
}

double max_abs(const Matrix& m) {
  double out = 0.0;
  for (double x : m.values()) out = std::max(out, std::abs(x));
  return out;
}

double norm2(std::span<const double> x) { return std::sqrt(kernels::sum_squares(x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("dot: lengths differ");
  return kernels::dot(a, b);
}

bool all_finite(const Matrix& m) { return all_finite(std::span<const double>(m.values())); }

bool all_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> index) {
  Matrix s(index.size(), index.size());
  for (std::size_t a = 0; a < index.size(); ++a)
    for (std::size_t b = 0; b < index.size(); ++b) s(a, b) = m(index[a], index[b]);
  return s;
}

}  // namespace mstab
