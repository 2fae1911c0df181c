#include "mstab/perturbation.hpp"

#include <cmath>
#include <limits>

#include "mstab/error.hpp"

namespace mstab {

namespace {

Matrix rank_one_update(const Matrix& a, const Vector& v, const Vector& w) {
  Matrix b = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) b(i, j) += v[i] * w[j];
  return b;
}

}  // namespace

RankOneSystem assemble(const SingularMMatrix& base, const Vector& v, const Vector& w,
                       const Tolerances& tol) {
  const std::size_t n = base.size();
  if (v.size() != n || w.size() != n)
    throw DomainError("assemble: v and w must have length " + std::to_string(n));
  if (!all_finite(v) || !all_finite(w)) throw DomainError("assemble: v and w must be finite");

  RankOneSystem sys;
  sys.base = base;
  sys.v = v;
  sys.w = w;
  sys.b = rank_one_update(base.a, v, w);
  sys.symmetric_base = is_symmetric(base.a, tol.symmetric);

  const double nv = norm2(v);
  const double nw = norm2(w);
  if (base.z_left && base.z_right) {
    const Vector& zl = *base.z_left;
    const Vector& zr = *base.z_right;
    sys.left_projection = dot(zl, v);
    sys.right_projection = dot(w, zr);
    sys.nzp = std::abs(*sys.left_projection) > tol.nzp * nv * norm2(zl) &&
              std::abs(*sys.right_projection) > tol.nzp * nw * norm2(zr);
  }

  if (sys.symmetric_base && base.geometrically_simple()) {
    const Vector& z = *base.z_right;
    const double nz = norm2(z);
    if (nv > 0.0 && nw > 0.0)
      sys.alpha = std::min(1.0, std::abs(dot(v, z) * dot(w, z)) / (nv * nw * nz * nz));
    const double window = tol.alg_window * frobenius_norm(base.a);
    double smallest = std::numeric_limits<double>::infinity();
    for (const Complex& c : base.spectrum_a.values)
      if (std::abs(c) > window) smallest = std::min(smallest, c.real());
    if (std::isfinite(smallest) && smallest > 0.0) sys.tau = smallest;
  }
  return sys;
}

bool nzp(const RankOneSystem& sys) {
  if (!sys.base.geometrically_simple())
    throw HypothesisError("NZP is undefined: zero is not a geometrically simple eigenvalue of A (geometric multiplicity " +
                          std::to_string(sys.base.geo_mult_zero) + ")");
  return sys.nzp;
}

Complex secular_residual(const RankOneSystem& sys, Complex mu) {
  CVector rhs(sys.v.begin(), sys.v.end());
  const CVector x = shifted_solve(sys.base.a, mu, rhs);
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += sys.w[i] * x[i];
  return s - 1.0;
}

ComplexMatrix sherman_morrison_resolvent(const RankOneSystem& sys, Complex mu) {
  const std::size_t n = sys.size();
  const ComplexMatrix r = shifted_inverse(sys.base.a, mu);
  CVector rv(n, Complex{}), wr(n, Complex{});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      rv[i] += r(i, j) * sys.v[j];
      wr[j] += sys.w[i] * r(i, j);
    }
  Complex s{};
  for (std::size_t i = 0; i < n; ++i) s += sys.w[i] * rv[i];
  const Complex denom = 1.0 - s;
  if (std::abs(denom) <= 1e-8)
    throw SingularShiftError("shift satisfies the secular equation: it is an eigenvalue of B",
                             std::numeric_limits<double>::infinity());
  ComplexMatrix out = r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) += rv[i] * wr[j] / denom;
  return out;
}

RankOneSystem with_scaled_v(const RankOneSystem& sys, double t) {
  RankOneSystem out = sys;
  for (double& x : out.v) x *= t;
  out.b = rank_one_update(sys.base.a, out.v, out.w);
  if (out.left_projection) *out.left_projection *= t;
  if (t == 0.0) {
    out.nzp = false;
    out.alpha.reset();
  }
  return out;
}

}  // namespace mstab
