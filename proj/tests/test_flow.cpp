#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mstab/error.hpp"
#include "mstab/flow.hpp"
#include "mstab/linalg.hpp"
#include "support.hpp"

using namespace mstab;

namespace {

const double s2 = 1.0 / std::sqrt(2.0);

Vector unit_random(std::mt19937_64& rng, std::size_t n) {
  Vector z = testing::random_vector(rng, n, -1, 1);
  const double nz = norm2(z);
  for (double& x : z) x /= nz;
  return z;
}

// Central differences of rhs in (z, lambda).
Matrix finite_difference_jacobian(const Vector& z, double lambda, const Matrix& h, const Matrix& c, double step) {
  const std::size_t n = z.size();
  Matrix j(n + 1, n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    FlowState plus{z, lambda, 0.0}, minus{z, lambda, 0.0};
    if (k < n) {
      plus.z[k] += step;
      minus.z[k] -= step;
    } else {
      plus.lambda += step;
      minus.lambda -= step;
    }
    const FlowDerivative fp = rhs(plus, h, c), fm = rhs(minus, h, c);
    for (std::size_t i = 0; i < n; ++i) j(i, k) = (fp.dz[i] - fm.dz[i]) / (2 * step);
    j(n, k) = (fp.dlambda - fm.dlambda) / (2 * step);
  }
  return j;
}

}  // namespace

TEST_CASE("right-hand side") {
  const Matrix h{{0, 1}, {1, 0}};
  const FlowDerivative eq = rhs({{s2, s2}, 1.0, 0.0}, h, Matrix::identity(2));
  CHECK(eq.norm() < 1e-15);

  const FlowDerivative id = rhs({{0.6, 0.8}, 0.0, 0.0}, Matrix::identity(2), Matrix::identity(2));
  CHECK(norm2(id.dz) < 1e-15);
  CHECK(id.dlambda == doctest::Approx(1.0));

  const FlowDerivative e1 = rhs({{1, 0}, 0.0, 0.0}, h, Matrix::identity(2));
  CHECK(e1.dz == Vector{0, 1});
  CHECK(e1.dlambda == 0.0);

  CHECK_THROWS_AS(rhs({{0, 0}, 0.0, 0.0}, h, Matrix::identity(2)), DomainError);
  CHECK_THROWS_AS(rhs({{1, 0, 0}, 0.0, 0.0}, h, Matrix::identity(2)), DomainError);
}

TEST_CASE("integration from an eigenpair stops immediately") {
  const Trajectory tr = integrate({{s2, s2}, 1.0, 0.0}, Matrix{{0, 1}, {1, 0}}, Matrix::identity(2));
  CHECK(tr.converged);
  CHECK(tr.steps == 0);
}

TEST_CASE("integration converges to an eigenpair of a symmetric matrix") {
  const Matrix h{{0, 1}, {1, 0}};
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 10; ++rep) {
    const Trajectory tr = integrate({unit_random(rng, 2), 0.0, 0.0}, h, Matrix::identity(2));
    REQUIRE(tr.converged);
    CHECK(tr.residual < 1e-6);
    const FlowState& last = tr.states.back();
    CHECK(std::abs(std::abs(last.lambda) - 1.0) < 1e-6);
    CHECK(std::abs(std::abs(last.z[0]) - s2) < 1e-6);
  }
}

TEST_CASE("raw norm drift over ten thousand steps") {
  std::mt19937_64 rng(103);
  const Matrix h = testing::random_symmetric_nonneg(rng, 4);
  FlowOptions opt;
  opt.max_steps = 10000;
  opt.renormalize = false;
  opt.conv_tol = 0.0;
  opt.record_stride = 1000;
  const Trajectory tr = integrate({unit_random(rng, 4), 0.0, 0.0}, h, Matrix::identity(4), opt);
  CHECK(tr.steps == 10000);
  CHECK(tr.max_norm_drift < 1e-8);
}

TEST_CASE("integration preconditions and divergence") {
  const Matrix h{{0, 1}, {1, 0}};
  CHECK_THROWS_AS(integrate({{1, 1}, 0.0, 0.0}, h, Matrix::identity(2)), DomainError);
  CHECK_THROWS_AS(integrate({{1, 0}, 0.0, 0.0}, h, Matrix{{1, 1}, {1, 1}}), DomainError);
  FlowOptions opt;
  opt.dt = 10.0;
  opt.max_steps = 1000;
  CHECK_THROWS_AS(integrate({{1, 0}, 0.0, 0.0}, h, Matrix{{-50, 0}, {0, -50}}, opt), DivergenceError);
}

TEST_CASE("linearization at an identity equilibrium") {
  const Matrix j = linearization({0.6, 0.8}, 1.0, Matrix::identity(2), Matrix::identity(2));
  REQUIRE(j.rows() == 3);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(j(i, k)) < 1e-15);
    CHECK(std::abs(j(2, i)) < 1e-15);
  }
  CHECK(j(2, 2) == doctest::Approx(-1.0));
}

TEST_CASE("linearization of the two-cycle at its Perron pair") {
  const Matrix j = linearization({s2, s2}, 1.0, Matrix{{0, 1}, {1, 0}}, Matrix::identity(2));
  const Matrix want{{-1, 1, 0}, {1, -1, 0}, {0, 0, -1}};
  CHECK(max_abs(subtract(j, want)) < 1e-15);
  CHECK_THROWS_AS(linearization({1, 0}, 0.0, Matrix{{0, 1}, {1, 0}}, Matrix::identity(2)), HypothesisError);
}

TEST_CASE("linearization matches central differences") {
  std::mt19937_64 rng(107);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = testing::pick(rng, 2, 6);
    Matrix h = testing::random_matrix(rng, n);
    h = add(h, transpose(h));
    const SymmetricEigen e = symmetric_eigen(h);
    const std::size_t k = testing::pick(rng, 0, n - 1);
    Vector z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = e.vectors(i, k);
    const Matrix g = testing::random_matrix(rng, n);
    Matrix c = multiply(g, transpose(g));
    for (std::size_t i = 0; i < n; ++i) c(i, i) += 0.5;
    const Matrix j = linearization(z, e.values[k], h, c);
    const Matrix fd = finite_difference_jacobian(z, e.values[k], h, c, 1e-6);
    CHECK(max_abs(subtract(j, fd)) < 1e-5);
  }
}

TEST_CASE("reduced stability matrix") {
  const Matrix h{{0, 1}, {1, 0}};
  const Matrix r = reduced_stability_matrix({s2, s2}, 1.0, h, Matrix::identity(2));
  CHECK(max_abs(subtract(r, Matrix{{1.5, -0.5}, {-0.5, 1.5}})) < 1e-15);
  CHECK(spectrum_distance(spectrum(r).values, CVector{1.0, 2.0}) < 1e-14);

  const Matrix neg = reduced_stability_matrix({s2, -s2}, -1.0, h, Matrix::identity(2));
  CHECK(spectrum_distance(spectrum(neg).values, CVector{1.0, -2.0}) < 1e-14);
}

TEST_CASE("tangent completion is an orthonormal basis of the complement") {
  std::mt19937_64 rng(109);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = testing::pick(rng, 1, 7);
    Vector z = unit_random(rng, n);
    if (rep % 5 == 0) {
      z.assign(n, 0.0);
      z[rep % n] = 1.0;
    }
    const Matrix v = tangent_completion(z);
    REQUIRE(v.rows() == n);
    REQUIRE(v.cols() == n - 1);
    const Matrix g = multiply(transpose(v), v);
    CHECK(max_abs(subtract(g, Matrix::identity(n - 1))) < 1e-13);
    const Vector p = multiply_transposed(v, z);
    CHECK(norm2(p) < 1e-13);
  }
}

TEST_CASE("equilibrium stability equivalence") {
  const Matrix h{{0, 1}, {1, 0}};
  CHECK(equilibrium_stability_equivalence({s2, s2}, 1.0, h, Matrix::identity(2)));
  CHECK(equilibrium_stability_equivalence({s2, -s2}, -1.0, h, Matrix::identity(2)));
  CHECK(equilibrium_stability_equivalence({s2, s2}, 1.0, h, Matrix{{1, 0}, {0, 2}}));

  std::mt19937_64 rng(113);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = testing::pick(rng, 2, 6);
    Matrix hs = testing::random_matrix(rng, n);
    hs = add(hs, transpose(hs));
    const SymmetricEigen e = symmetric_eigen(hs);
    Vector z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = e.vectors(i, n - 1);
    // A random orthonormal completion: QR of a random block against z.
    Matrix q(n, n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      Vector x = testing::random_vector(rng, n, -1, 1);
      const double pz = dot(x, z);
      for (std::size_t i = 0; i < n; ++i) x[i] -= pz * z[i];
      for (std::size_t m = 0; m < k; ++m) {
        double pm = 0.0;
        for (std::size_t i = 0; i < n; ++i) pm += x[i] * q(i, m);
        for (std::size_t i = 0; i < n; ++i) x[i] -= pm * q(i, m);
      }
      const double nx = norm2(x);
      for (std::size_t i = 0; i < n; ++i) q(i, k) = x[i] / nx;
    }
    CHECK(equilibrium_stability_equivalence(z, e.values[n - 1], hs, Matrix::identity(n), q));
  }
}

TEST_CASE("trajectory CSV layout") {
  FlowOptions opt;
  opt.max_steps = 5;
  opt.conv_tol = 0.0;
  const Trajectory tr = integrate({{1, 0}, 0.0, 0.0}, Matrix{{0, 1}, {1, 0}}, Matrix::identity(2), opt);
  std::ostringstream os;
  write_csv(os, tr, Matrix{{0, 1}, {1, 0}});
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,z1,z2,lambda,residual");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == tr.states.size());
}
