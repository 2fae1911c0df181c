#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "mstab/linalg.hpp"
#include "mstab/perturbation.hpp"

namespace mstab {

struct Crossing {
  double t = 0.0;
  double b = 0.0;              // |Im| of the crossing eigenvalue
  double min_real_part = 0.0;  // at t
  double bracket = 0.0;        // final bisection interval width
  bool into_instability = true;
};

// Gamma(t) = A + t v w^T on a uniform grid. Spectra are reordered so that
// index k follows one eigenvalue path (nearest neighbour); crossings are
// read off the min-real-part envelope, which does not depend on that order.
struct HomotopyTrace {
  std::vector<double> t_grid;
  std::vector<Spectrum> spectra;
  std::vector<double> min_real_parts;
  std::vector<Crossing> crossings;
};

Matrix gamma_at(const RankOneSystem& sys, double t);

// Sign changes of min Re sigma(Gamma(t)) outside the band 1e-10 ||Gamma||_F
// are bisected (at most 200 halvings) until |min Re| falls inside the band
// or the bracket is below 1e-12 t_max.
HomotopyTrace trace(const RankOneSystem& sys, double t_max, int steps = 400);

// Largest t0 <= 1 with Gamma strictly stable on (0, t0]. Requires an
// algebraically simple zero, v, w >= 0 and NZP (HypothesisError otherwise).
double small_t_stability(const RankOneSystem& sys);

// (sqrt(alpha / (1 - alpha)) tau, ||v|| ||w|| / 2). HypothesisError unless A
// is symmetric with a simple zero and v, w != 0; DegenerateError at alpha = 1.
std::pair<double, double> crossing_bounds(const RankOneSystem& sys);

// |Im w^T R v - (-<w,z><v,z> / (b ||z||^2) + Im w^T (I-P) R (I-P) v)| with
// R = (b i I - A)^{-1}, P = z z^T / ||z||^2.
double imaginary_decomposition_residual(const RankOneSystem& sys, double b);

// Smallest grid t1 such that Gamma is strictly stable at every sampled
// t in (t1, t_max]; empty when Gamma(t_max) is not strictly stable.
// Empirical output only.
std::optional<double> large_t_probe(const RankOneSystem& sys, double t_max, int steps = 400);

// Columns: t,index,re,im,min_real_part.
void write_csv(std::ostream& os, const HomotopyTrace& trace);

}  // namespace mstab
