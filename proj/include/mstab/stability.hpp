#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mstab/linalg.hpp"
#include "mstab/perturbation.hpp"

namespace mstab {

enum class Verdict { StrictlyStable, MarginallyStable, Unstable };

const char* verdict_name(Verdict v) noexcept;

// One sufficient condition, evaluated whether or not it fired. `values`
// carries the numbers the decision was made on (alpha, tau, slack, ...).
struct ClauseEvidence {
  ClauseEvidence() = default;
  explicit ClauseEvidence(std::string name) : id(std::move(name)) {}

  std::string id;
  bool fired = false;
  std::string detail;
  std::vector<std::pair<std::string, double>> values;
  std::optional<Matrix> matrix;  // K for clause v, E for corollary ii-c
};

struct StabilityReport {
  Verdict verdict = Verdict::MarginallyStable;
  double min_real_part = 0.0;
  Complex witness{};
  double margin = 0.0;  // absolute band actually used
  Spectrum spectrum;
  std::vector<ClauseEvidence> clauses;
  // Some clause fired with its hypotheses (including NZP) satisfied.
  bool guaranteed = false;

  std::vector<std::string> fired() const;
  const ClauseEvidence* clause(const std::string& id) const;
};

// Verdict from the full spectrum with band relative_margin * ||M||_F.
StabilityReport classify(const Matrix& m, double relative_margin = 1e-9);

// Every sufficient condition for strict positive stability of B = A + v w^T.
// Clauses are evaluated independently. When one fires and NZP holds the
// verdict of classify(B) is cross-checked; an Unstable spectrum throws
// TheoryViolation with a diagnostic dump. HypothesisError when zero is not
// geometrically simple (B is then singular for every v, w).
//
// Clause (v) uses K >= 0 with |h_ij - v_i w_j| <= k_ij off the diagonal and
// k_ii >= h_ii - v_i w_i; the default K is the smallest such matrix.
// Clause (ii) additionally requires w^T v > 0, clause (vi) v, w >= 0.
StabilityReport check_criteria(const RankOneSystem& sys, const std::optional<Matrix>& k = std::nullopt,
                               const Tolerances& tol = {});

// Default dominating matrix for clause (v).
Matrix default_fan_matrix(const Matrix& h, const Vector& v, const Vector& w);

// Predicted sigma(A + z_r w^T): sigma(A) with one zero replaced by w^T z_r.
// Compared against spectrum(B); TheoryViolation on mismatch.
Spectrum eigenvector_perturbation_spectrum(const SingularMMatrix& base, const Vector& w);

// C (rho I - H + v v^T) for normal H and symmetric positive definite C.
// Clauses "normal-i" (rho in sigma(H), geometrically simple, v^T z != 0) and
// "normal-ii" (rho not in sigma(H)). Also checks rho(H + H^T) = 2 max|Re mu|.
StabilityReport normal_case_check(const Matrix& h, const Vector& v, const Matrix& c,
                                  const Tolerances& tol = {});

// Corollary conditions implying D-stability: "cor-i-a", "cor-i-b",
// "cor-ii-c", "cor-iii". The verdict is that of B itself (D = I).
StabilityReport corollary_clauses(const RankOneSystem& sys, const Tolerances& tol = {});

// Diagonal of E = diag(w) diag(v)^{-1}; DomainError unless every ratio is
// finite and positive.
Vector symmetrizing_scaling(const Vector& v, const Vector& w);

struct DStabilityProbe {
  std::size_t samples_tested = 0;
  std::size_t refinement_evaluations = 0;
  Vector worst_d;
  double worst_min_real_part = 0.0;
  bool counterexample_found = false;
};

// Random positive diagonals D (log-uniform in [1e-3, 1e3], D = I first) and
// coordinate-descent refinement of the worst one. Deterministic in seed.
// A counterexample needs min Re sigma(DB) < -1e-9 ||DB||_F.
DStabilityProbe d_stability_probe(const Matrix& b, std::size_t n_samples, std::uint64_t seed);

// Projected gradient ascent on lambda_min(B^T D + D B) over unit-trace
// positive diagonals. Returns the diagonal of D on success.
std::optional<Vector> lyapunov_diagonal_search(const Matrix& b, int iters = 2000);

}  // namespace mstab
