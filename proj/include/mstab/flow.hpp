#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mstab/matrix.hpp"

namespace mstab {

// dz/dt = (I - P_z) C (H - lambda I) z,  dlambda/dt = z^T C (H - lambda I) z,
// P_z = z z^T / ||z||^2. Equilibria are exactly the eigenpairs of H.
struct FlowState {
  Vector z;
  double lambda = 0.0;
  double t = 0.0;
};

struct FlowDerivative {
  Vector dz;
  double dlambda = 0.0;
  double norm() const;
};

struct Trajectory {
  std::vector<FlowState> states;
  bool converged = false;
  double residual = 0.0;        // ||H z - lambda z|| at the last state
  double max_norm_drift = 0.0;  // max | ||z||^2 - 1 | before any renormalization
  std::size_t steps = 0;
};

struct FlowOptions {
  double dt = 0.01;
  std::size_t max_steps = 100000;
  double conv_tol = 1e-10;
  bool renormalize = true;
  std::size_t record_stride = 1;
};

// DomainError for z = 0 or mismatched shapes.
FlowDerivative rhs(const FlowState& s, const Matrix& h, const Matrix& c);

// Classical RK4 with fixed step. Stops when ||rhs|| < conv_tol and the
// eigen-residual is below conv_tol. DivergenceError when |lambda| exceeds
// 1e6 * max(||H||_F, 1) or the state turns non-finite.
Trajectory integrate(const FlowState& initial, const Matrix& h, const Matrix& c, const FlowOptions& opt = {});

// (n+1) x (n+1) Jacobian at an equilibrium:
//   [[(I-P) C (H - lambda I), -(I-P) C z], [z^T C (H - lambda I), -z^T C z]].
// HypothesisError unless ||rhs|| <= 1e-8 ||H||_F max(1, |lambda|).
Matrix linearization(const Vector& z, double lambda, const Matrix& h, const Matrix& c);

// C (lambda I - H + z z^T) for unit z at an equilibrium.
Matrix reduced_stability_matrix(const Vector& z, double lambda, const Matrix& h, const Matrix& c);

// n x (n-1) orthonormal basis of z-perp: Gram-Schmidt on e_1..e_n, skipping
// candidates whose residual norm drops below 0.5, then pivoted fill-in.
Matrix tangent_completion(const Vector& z);

// Spectrum of -Q^T J Q, Q = blockdiag(V, 1), against the reduced matrix;
// true when the spectra agree within 1e-7 max(1, ||reduced||_F).
bool equilibrium_stability_equivalence(const Vector& z, double lambda, const Matrix& h, const Matrix& c);
bool equilibrium_stability_equivalence(const Vector& z, double lambda, const Matrix& h, const Matrix& c,
                                       const Matrix& v);

// Columns: t,z1..zn,lambda,residual.
void write_csv(std::ostream& os, const Trajectory& tr, const Matrix& h);

}  // namespace mstab
