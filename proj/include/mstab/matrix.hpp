#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mstab {

using Complex = std::complex<double>;
using Vector = std::vector<double>;
using CVector = std::vector<Complex>;

// Dense row-major matrix. Most operations in this library expect square
// input and say so; rectangular shapes exist for bases and workspaces.
template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  explicit DenseMatrix(std::size_t n) : DenseMatrix(n, n) {}
  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows);

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  std::size_t size() const noexcept { return rows_; }

  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  const std::vector<T>& values() const noexcept { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
DenseMatrix<T>::DenseMatrix(std::initializer_list<std::initializer_list<T>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    std::size_t k = 0;
    for (const T& x : r) {
      if (k++ < cols_) data_.push_back(x);
    }
    for (; k < cols_; ++k) data_.push_back(T{});
  }
}

using Matrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<Complex>;

// Basic arithmetic. Shapes are checked with DomainError.
Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& m, std::span<const double> x);
Vector multiply_transposed(const Matrix& m, std::span<const double> x);  // m^T x
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scaled(const Matrix& m, double s);
Matrix outer(std::span<const double> v, std::span<const double> w);
Matrix diagonal(std::span<const double> d);
Matrix to_real_checked(const ComplexMatrix& m);
ComplexMatrix to_complex(const Matrix& m);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
double norm2(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
bool all_finite(const Matrix& m);
bool all_finite(std::span<const double> x);

// Submatrix on a sorted index set (rows and columns).
Matrix principal_submatrix(const Matrix& m, std::span<const std::size_t> index);

void require_square(const Matrix& m, const char* what);

}  // namespace mstab
