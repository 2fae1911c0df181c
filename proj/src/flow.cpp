#include "mstab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "mstab/error.hpp"
#include "mstab/linalg.hpp"

namespace mstab {

namespace {

void check_shapes(std::size_t n, const Matrix& h, const Matrix& c) {
  if (!h.square() || h.rows() != n) throw DomainError("flow: H must be square and match z");
  if (!c.square() || c.rows() != n) throw DomainError("flow: C must be square and match z");
}

double eigen_residual(const Matrix& h, const Vector& z, double lambda) {
  Vector r = multiply(h, z);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lambda * z[i];
  return norm2(r);
}

void require_equilibrium(const Vector& z, double lambda, const Matrix& h, const Matrix& c) {
  const double r = rhs({z, lambda, 0.0}, h, c).norm();
  const double bound = 1e-8 * frobenius_norm(h) * std::max(1.0, std::abs(lambda));
  if (!(r <= bound)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "not an equilibrium: ||rhs|| = %.3g > %.3g", r, bound);
    throw HypothesisError(buf);
  }
}

// u + a * du
FlowState advance(const FlowState& s, const FlowDerivative& d, double a) {
  FlowState out = s;
  for (std::size_t i = 0; i < out.z.size(); ++i) out.z[i] += a * d.dz[i];
  out.lambda += a * d.dlambda;
  return out;
}

}  // namespace

double FlowDerivative::norm() const { return std::sqrt(dot(dz, dz) + dlambda * dlambda); }

FlowDerivative rhs(const FlowState& s, const Matrix& h, const Matrix& c) {
  const std::size_t n = s.z.size();
  check_shapes(n, h, c);
  const double zz = dot(s.z, s.z);
  if (!(zz > 0.0)) throw DomainError("flow: z must be nonzero");
  Vector y = multiply(h, s.z);
  for (std::size_t i = 0; i < n; ++i) y[i] -= s.lambda * s.z[i];
  const Vector cy = multiply(c, y);
  FlowDerivative d;
  d.dlambda = dot(s.z, cy);
  d.dz = cy;
  for (std::size_t i = 0; i < n; ++i) d.dz[i] -= d.dlambda / zz * s.z[i];
  return d;
}

Trajectory integrate(const FlowState& initial, const Matrix& h, const Matrix& c, const FlowOptions& opt) {
  const std::size_t n = initial.z.size();
  check_shapes(n, h, c);
  if (n == 0) throw DomainError("flow: empty state");
  if (!(opt.dt > 0.0)) throw DomainError("flow: dt must be positive");
  if (std::abs(norm2(initial.z) - 1.0) > 1e-12) throw DomainError("flow: initial z must have unit norm");
  if (numerical_rank(c, 1e-14) < n) throw DomainError("flow: C is singular");
  const double limit = 1e6 * std::max(frobenius_norm(h), 1.0);
  const std::size_t stride = std::max<std::size_t>(opt.record_stride, 1);

  Trajectory tr;
  FlowState s = initial;
  tr.states.push_back(s);
  for (;;) {
    const FlowDerivative k1 = rhs(s, h, c);
    if (k1.norm() < opt.conv_tol && eigen_residual(h, s.z, s.lambda) <= opt.conv_tol) {
      tr.converged = true;
      break;
    }
    if (tr.steps >= opt.max_steps) break;

    const double dt = opt.dt;
    const FlowDerivative k2 = rhs(advance(s, k1, dt / 2), h, c);
    const FlowDerivative k3 = rhs(advance(s, k2, dt / 2), h, c);
    const FlowDerivative k4 = rhs(advance(s, k3, dt), h, c);
    for (std::size_t i = 0; i < n; ++i) s.z[i] += dt / 6 * (k1.dz[i] + 2 * k2.dz[i] + 2 * k3.dz[i] + k4.dz[i]);
    s.lambda += dt / 6 * (k1.dlambda + 2 * k2.dlambda + 2 * k3.dlambda + k4.dlambda);
    s.t = initial.t + dt * double(++tr.steps);

    const double zz = dot(s.z, s.z);
    if (!std::isfinite(zz) || !std::isfinite(s.lambda) || std::abs(s.lambda) > limit) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "flow diverged at t = %.6g (lambda = %.6g)", s.t, s.lambda);
      throw DivergenceError(buf);
    }
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(zz - 1.0));
    if (opt.renormalize) {
      const double nz = std::sqrt(zz);
      for (double& x : s.z) x /= nz;
    }
    if (tr.steps % stride == 0) tr.states.push_back(s);
  }
  if (tr.states.back().t != s.t) tr.states.push_back(s);
  tr.residual = eigen_residual(h, s.z, s.lambda);
  return tr;
}

Matrix linearization(const Vector& z, double lambda, const Matrix& h, const Matrix& c) {
  const std::size_t n = z.size();
  check_shapes(n, h, c);
  require_equilibrium(z, lambda, h, c);
  const double zz = dot(z, z);

  Matrix shifted = h;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
  const Matrix cs = multiply(c, shifted);
  const Vector cz = multiply(c, z);
  Matrix proj = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) proj(i, j) -= z[i] * z[j] / zz;
  const Matrix top = multiply(proj, cs);
  const Vector corner = multiply(proj, cz);
  const Vector bottom = multiply_transposed(cs, z);

  Matrix j(n + 1, n + 1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t q = 0; q < n; ++q) j(r, q) = top(r, q);
    j(r, n) = -corner[r];
    j(n, r) = bottom[r];
  }
  j(n, n) = -dot(z, cz);
  return j;
}

Matrix reduced_stability_matrix(const Vector& z, double lambda, const Matrix& h, const Matrix& c) {
  const std::size_t n = z.size();
  check_shapes(n, h, c);
  if (std::abs(norm2(z) - 1.0) > 1e-8) throw DomainError("reduced_stability_matrix: z must have unit norm");
  require_equilibrium(z, lambda, h, c);
  Matrix m = scaled(h, -1.0);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) += lambda;
    for (std::size_t j = 0; j < n; ++j) m(i, j) += z[i] * z[j];
  }
  return multiply(c, m);
}

Matrix tangent_completion(const Vector& z) {
  const std::size_t n = z.size();
  const double nz = norm2(z);
  if (!(nz > 0.0)) throw DomainError("tangent_completion: z must be nonzero");
  std::vector<Vector> basis{z};
  for (double& x : basis[0]) x /= nz;

  auto residual_of = [&](std::size_t k) {
    Vector e(n, 0.0);
    e[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : basis) {
        const double p = dot(q, e);
        for (std::size_t i = 0; i < n; ++i) e[i] -= p * q[i];
      }
    return e;
  };

  std::vector<bool> taken(n, false);
  for (std::size_t k = 0; k < n && basis.size() < n; ++k) {
    Vector e = residual_of(k);
    const double ne = norm2(e);
    if (ne < 0.5) continue;
    for (double& x : e) x /= ne;
    basis.push_back(std::move(e));
    taken[k] = true;
  }
  while (basis.size() < n) {
    std::size_t best = n;
    double best_norm = 0.0;
    Vector best_e;
    for (std::size_t k = 0; k < n; ++k) {
      if (taken[k]) continue;
      Vector e = residual_of(k);
      const double ne = norm2(e);
      if (ne > best_norm) {
        best_norm = ne;
        best = k;
        best_e = std::move(e);
      }
    }
    if (best == n || best_norm < 1e-8) throw DomainError("tangent_completion: basis construction failed");
    for (double& x : best_e) x /= best_norm;
    basis.push_back(std::move(best_e));
    taken[best] = true;
  }

  Matrix v(n, n - 1);
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) v(i, k - 1) = basis[k][i];
  return v;
}

bool equilibrium_stability_equivalence(const Vector& z, double lambda, const Matrix& h, const Matrix& c) {
  return equilibrium_stability_equivalence(z, lambda, h, c, tangent_completion(z));
}

bool equilibrium_stability_equivalence(const Vector& z, double lambda, const Matrix& h, const Matrix& c,
                                       const Matrix& v) {
  const std::size_t n = z.size();
  if (v.rows() != n || v.cols() + 1 != n) throw DomainError("equilibrium_stability_equivalence: V must be n x (n-1)");
  const Matrix reduced = reduced_stability_matrix(z, lambda, h, c);
  const Matrix j = linearization(z, lambda, h, c);

  Matrix q(n + 1, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k + 1 < n; ++k) q(i, k) = v(i, k);
  q(n, n - 1) = 1.0;
  const Matrix restricted = scaled(multiply(transpose(q), multiply(j, q)), -1.0);

  const Spectrum a = spectrum(restricted);
  const Spectrum b = spectrum(reduced);
  const double bound = 1e-7 * std::max(1.0, frobenius_norm(reduced));
  return spectrum_distance(a.values, b.values) <= bound && std::abs(a.min_real() - b.min_real()) <= bound;
}

void write_csv(std::ostream& os, const Trajectory& tr, const Matrix& h) {
  const std::size_t n = tr.states.empty() ? 0 : tr.states.front().z.size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",z" << i + 1;
  os << ",lambda,residual\n";
  char buf[40];
  for (const FlowState& s : tr.states) {
    std::snprintf(buf, sizeof buf, "%.17g", s.t);
    os << buf;
    for (double x : s.z) {
      std::snprintf(buf, sizeof buf, ",%.17g", x);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g", s.lambda);
    os << buf;
    std::snprintf(buf, sizeof buf, ",%.17g\n", eigen_residual(h, s.z, s.lambda));
    os << buf;
  }
}

}  // namespace mstab
