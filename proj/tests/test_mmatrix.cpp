#include <doctest.h>

#include <cmath>
#include <random>

#include "mstab/error.hpp"
#include "mstab/mmatrix.hpp"
#include "mstab/report.hpp"
#include "support.hpp"

using namespace mstab;

namespace {

bool near(const Vector& a, const Vector& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("two-cycle base") {
  const SingularMMatrix m = build_mmatrix(Matrix{{0, 1}, {1, 0}});
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(m.rho == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs(subtract(m.a, Matrix{{1, -1}, {-1, 1}})) < 1e-14);
  CHECK(m.irreducible);
  CHECK(m.geo_mult_zero == 1);
  CHECK(m.alg_mult_zero == 1);
  REQUIRE(m.z_left);
  REQUIRE(m.z_right);
  CHECK(near(*m.z_left, {s, s}, 1e-14));
  CHECK(near(*m.z_right, {s, s}, 1e-14));
}

TEST_CASE("Jordan block base is geometrically but not algebraically simple") {
  const SingularMMatrix m = build_mmatrix(Matrix{{1, 1}, {0, 1}});
  CHECK(m.rho == 1.0);
  CHECK(max_abs(subtract(m.a, Matrix{{0, -1}, {0, 0}})) == 0.0);
  CHECK(m.geo_mult_zero == 1);
  CHECK(m.alg_mult_zero == 2);
  REQUIRE(m.z_left);
  REQUIRE(m.z_right);
  CHECK(near(*m.z_left, {0, 1}, 1e-15));
  CHECK(near(*m.z_right, {1, 0}, 1e-15));
}

TEST_CASE("zero base has a threefold zero and no Perron vectors") {
  const SingularMMatrix m = build_mmatrix(Matrix(3, 3));
  CHECK(m.rho == 0.0);
  CHECK(max_abs(m.a) == 0.0);
  CHECK(m.geo_mult_zero == 3);
  CHECK_FALSE(m.z_left);
  CHECK_FALSE(m.z_right);
}

TEST_CASE("build rejects negative, non-finite and non-square input") {
  CHECK_THROWS_AS(build_mmatrix(Matrix{{0, -1}, {1, 0}}), DomainError);
  CHECK_THROWS_AS(build_mmatrix(Matrix{{0, NAN}, {1, 0}}), DomainError);
  CHECK_THROWS_AS(build_mmatrix(Matrix(2, 3)), DomainError);
}

TEST_CASE("irreducibility uses the exact zero pattern") {
  Matrix h = counterexample_problem().h;
  CHECK_FALSE(is_irreducible(h));
  h(5, 0) = 1e-6;
  CHECK(is_irreducible(h));
  CHECK(is_irreducible(Matrix{{0, 1}, {1, 0}}));
  CHECK(is_irreducible(Matrix{{0}}));
  CHECK_FALSE(is_irreducible(Matrix{{1, 1}, {0, 1}}));
}

TEST_CASE("counterexample H has spectral radius one") {
  const SingularMMatrix m = build_mmatrix(counterexample_problem().h);
  CHECK(std::abs(m.rho - 1.0) < 1e-3);
  CHECK_FALSE(m.irreducible);
}

TEST_CASE("comparison matrix") {
  CHECK(comparison_matrix(Matrix::identity(3)) == Matrix::identity(3));
  CHECK(comparison_matrix(Matrix{{1, 2}, {-3, 4}}) == Matrix{{1, -2}, {-3, 4}});
}

TEST_CASE("nonsingular M-matrix predicate") {
  CHECK(is_nonsingular_m_matrix(Matrix::identity(3)));
  const Matrix a{{1, -1}, {-1, 1}};
  CHECK_FALSE(is_nonsingular_m_matrix(a));
  CHECK(is_nonsingular_m_matrix(add(a, Matrix::identity(2))));
  CHECK_FALSE(is_nonsingular_m_matrix(Matrix{{1, 0.5}, {0, 1}}));
}

TEST_CASE("H-matrix predicate") {
  CHECK(is_h_matrix_positive_diagonal(Matrix::identity(4)));
  CHECK_FALSE(is_h_matrix_positive_diagonal(Matrix{{0, 0}, {0, 1}}));
  CHECK_FALSE(is_h_matrix_positive_diagonal(Matrix{{-1, 0}, {0, 1}}));
}

TEST_CASE("dominated rank-one updates of irreducible bases are H-matrices") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = testing::pick(rng, 2, 6);
    const Matrix h0 = testing::random_irreducible(rng, n);
    const Vector v = testing::random_vector(rng, n, 0.1, 1.0);
    const Vector w = testing::random_vector(rng, n, 0.1, 1.0);
    Matrix h = h0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) = std::max(h0(i, j), 0.5 * v[i] * w[j]);
    const SingularMMatrix base = build_mmatrix(h);
    const Matrix b = add(base.a, outer(v, w));
    const Matrix m = comparison_matrix(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) CHECK(m(i, j) >= base.a(i, j) - 1e-15);
    CHECK(is_h_matrix_positive_diagonal(b));

    // Independent route: comparison(B) z_r has positive entries, so B is
    // strictly diagonally dominant after scaling columns by z_r.
    const Vector mz = multiply(m, *base.z_right);
    for (double x : mz) CHECK(x > 0.0);
  }
}

TEST_CASE("Perron vectors are nonnegative null vectors") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = testing::pick(rng, 1, 7);
    const SingularMMatrix m = build_mmatrix(testing::random_irreducible(rng, n));
    REQUIRE(m.geometrically_simple());
    CHECK(m.alg_mult_zero == 1);
    const double scale = std::max(1.0, frobenius_norm(m.a));
    CHECK(norm2(multiply(m.a, *m.z_right)) < 1e-10 * scale);
    CHECK(norm2(multiply_transposed(m.a, *m.z_left)) < 1e-10 * scale);
    for (double x : *m.z_right) CHECK(x > 0.0);
    for (double x : *m.z_left) CHECK(x > 0.0);
    CHECK(std::abs(norm2(*m.z_right) - 1.0) < 1e-12);
  }
}

TEST_CASE("Perron normalization") {
  const Vector z = perron_normalize({-3, -4, 5e-14});
  CHECK(std::abs(z[0] - 0.6) < 1e-15);
  CHECK(std::abs(z[1] - 0.8) < 1e-15);
  CHECK(z[2] == 0.0);
}
