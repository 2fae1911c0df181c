#include "mstab/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "mstab/error.hpp"

namespace mstab {

namespace {

constexpr double kCrossingBand = 1e-10;
constexpr double kStableBand = 1e-9;

Spectrum spectrum_at(const RankOneSystem& sys, double t, Matrix* out = nullptr) {
  Matrix g = gamma_at(sys, t);
  try {
    Spectrum s = spectrum(g);
    if (out) *out = std::move(g);
    return s;
  } catch (const ConvergenceError& e) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " (homotopy at t = %.17g)", t);
    throw ConvergenceError(e.what() + std::string(buf));
  }
}

struct Sample {
  double f;
  double scale;
  Complex witness;
};

Sample sample(const RankOneSystem& sys, double t) {
  Matrix g;
  const Spectrum s = spectrum_at(sys, t, &g);
  return {s.min_real(), frobenius_norm(g), s.min_real_witness()};
}

int sign_in_band(double f, double band) { return f > band ? 1 : f < -band ? -1 : 0; }

// Reorder next so that next[k] is the closest unused value to prev[k].
void associate(const CVector& prev, CVector& next) {
  const std::size_t n = prev.size();
  std::vector<bool> used(n, false);
  CVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = n;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(next[j] - prev[k]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    used[best] = true;
    out[k] = next[best];
  }
  next = std::move(out);
}

bool nonnegative(const Vector& x) {
  return std::all_of(x.begin(), x.end(), [](double a) { return a >= 0.0; });
}

}  // namespace

Matrix gamma_at(const RankOneSystem& sys, double t) {
  Matrix g = sys.base.a;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) += t * sys.v[i] * sys.w[j];
  return g;
}

HomotopyTrace trace(const RankOneSystem& sys, double t_max, int steps) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("trace: t_max must be positive and finite");
  if (steps < 2) throw DomainError("trace: need at least 2 steps");

  HomotopyTrace tr;
  tr.t_grid.resize(steps + 1);
  tr.spectra.resize(steps + 1);
  tr.min_real_parts.resize(steps + 1);
  std::vector<double> scales(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    const double t = t_max * double(k) / double(steps);
    Matrix g;
    tr.t_grid[k] = t;
    tr.spectra[k] = spectrum_at(sys, t, &g);
    tr.min_real_parts[k] = tr.spectra[k].min_real();
    scales[k] = frobenius_norm(g);
    if (k > 0) associate(tr.spectra[k - 1].values, tr.spectra[k].values);
  }

  int last = -1;
  int last_sign = 0;
  for (int k = 0; k <= steps; ++k) {
    const int s = sign_in_band(tr.min_real_parts[k], kCrossingBand * scales[k]);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      double lo = tr.t_grid[last], hi = tr.t_grid[k];
      Sample at = sample(sys, 0.5 * (lo + hi));
      double mid = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        at = sample(sys, mid);
        const int ms = sign_in_band(at.f, kCrossingBand * at.scale);
        if (ms == 0 || hi - lo < 1e-12 * t_max) break;
        (ms == last_sign ? lo : hi) = mid;
      }
      Crossing c;
      c.t = mid;
      c.b = std::abs(at.witness.imag());
      c.min_real_part = at.f;
      c.bracket = hi - lo;
      c.into_instability = last_sign > 0;
      tr.crossings.push_back(c);
    }
    last = k;
    last_sign = s;
  }
  return tr;
}

double small_t_stability(const RankOneSystem& sys) {
  if (sys.base.alg_mult_zero != 1) throw HypothesisError("zero is not an algebraically simple eigenvalue of A");
  if (!nonnegative(sys.v) || !nonnegative(sys.w)) throw HypothesisError("v or w has a negative entry");
  if (!sys.nzp) throw HypothesisError("NZP fails");

  // Near t = 0 the perturbed eigenvalue is O(t), so positivity is judged
  // against the rounding floor rather than the reporting band.
  auto stable = [&](double t) {
    const Sample s = sample(sys, t);
    return s.f > 64.0 * std::numeric_limits<double>::epsilon() * s.scale;
  };

  const int steps = 400;
  double good = 0.0;
  double bad = -1.0;
  for (int k = 1; k <= steps; ++k) {
    const double t = double(k) / steps;
    if (stable(t)) {
      good = t;
    } else {
      bad = t;
      break;
    }
  }
  if (bad < 0.0) return 1.0;
  if (good == 0.0) {
    double t = bad;
    for (int j = 0; j < 60 && good == 0.0; ++j) {
      t *= 0.5;
      if (stable(t))
        good = t;
      else
        bad = t;
    }
    if (good == 0.0) throw DegenerateError("no strictly stable t resolved above 2^-60 / 400");
  }
  for (int it = 0; it < 200 && bad - good > 1e-12; ++it) {
    const double mid = 0.5 * (good + bad);
    (stable(mid) ? good : bad) = mid;
  }
  return good;
}

std::pair<double, double> crossing_bounds(const RankOneSystem& sys) {
  if (!sys.symmetric_base) throw HypothesisError("A is not symmetric");
  if (sys.base.alg_mult_zero != 1) throw HypothesisError("zero is not an algebraically simple eigenvalue of A");
  const double nv = norm2(sys.v), nw = norm2(sys.w);
  if (nv == 0.0 || nw == 0.0) throw HypothesisError("v and w must be nonzero");
  if (!sys.alpha || !sys.tau) throw HypothesisError("alpha or tau undefined");
  if (*sys.alpha >= 1.0 - 1e-12) throw DegenerateError("alpha = 1: v and w are both parallel to z");
  const double a = *sys.alpha;
  return {std::sqrt(a / (1.0 - a)) * *sys.tau, nv * nw / 2.0};
}

double imaginary_decomposition_residual(const RankOneSystem& sys, double b) {
  if (!sys.symmetric_base) throw HypothesisError("A is not symmetric");
  if (!sys.base.z_right) throw HypothesisError("zero is not a geometrically simple eigenvalue of A");
  if (!(b > 0.0)) throw DomainError("imaginary_decomposition_residual: b must be positive");
  const std::size_t n = sys.size();
  const Vector& z = *sys.base.z_right;
  const double zz = dot(z, z);
  const ComplexMatrix r = shifted_inverse(sys.base.a, Complex(0.0, b));

  const double vz = dot(sys.v, z), wz = dot(sys.w, z);
  Vector pv = sys.v, pw = sys.w;
  for (std::size_t i = 0; i < n; ++i) {
    pv[i] -= vz / zz * z[i];
    pw[i] -= wz / zz * z[i];
  }
  Complex full{}, projected{};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      full += sys.w[i] * r(i, j) * sys.v[j];
      projected += pw[i] * r(i, j) * pv[j];
    }
  const double first = -wz * vz / (b * zz);
  return std::abs(full.imag() - (first + projected.imag()));
}

std::optional<double> large_t_probe(const RankOneSystem& sys, double t_max, int steps) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("large_t_probe: t_max must be positive and finite");
  if (steps < 2) throw DomainError("large_t_probe: need at least 2 steps");
  int first_stable = steps + 1;
  for (int k = steps; k >= 1; --k) {
    const Sample s = sample(sys, t_max * double(k) / double(steps));
    if (!(s.f > kStableBand * s.scale)) break;
    first_stable = k;
  }
  if (first_stable > steps) return std::nullopt;
  return t_max * double(first_stable - 1) / double(steps);
}

void write_csv(std::ostream& os, const HomotopyTrace& tr) {
  os << "t,index,re,im,min_real_part\n";
  char buf[128];
  for (std::size_t k = 0; k < tr.t_grid.size(); ++k)
    for (std::size_t i = 0; i < tr.spectra[k].size(); ++i) {
      const Complex& c = tr.spectra[k].values[i];
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g,%.17g,%.17g\n", tr.t_grid[k], i, c.real(), c.imag(),
                    tr.min_real_parts[k]);
      os << buf;
    }
}

}  // namespace mstab
