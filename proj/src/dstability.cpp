#include <algorithm>
#include <cmath>
#include <random>

#include "mstab/error.hpp"
#include "mstab/stability.hpp"

namespace mstab {

namespace {

constexpr double kLogLow = -3.0 * 2.302585092994046;  // ln 1e-3
constexpr double kLogHigh = 3.0 * 2.302585092994046;
constexpr double kDMin = 1e-3;
constexpr double kDMax = 1e3;

// 53-bit uniform in [0, 1); std::uniform_real_distribution is not
// reproducible across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

struct Eval {
  double min_re;
  double scale;
};

Eval evaluate(const Matrix& b, const Vector& d) {
  Matrix db = b;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) db(i, j) *= d[i];
  return {spectrum(db).min_real(), frobenius_norm(db)};
}

}  // namespace

DStabilityProbe d_stability_probe(const Matrix& b, std::size_t n_samples, std::uint64_t seed) {
  require_square(b, "d_stability_probe");
  if (n_samples < 1) throw DomainError("d_stability_probe: need at least one sample");
  const std::size_t n = b.rows();

  std::mt19937_64 rng(seed);
  std::vector<Vector> samples;
  samples.reserve(n_samples);
  samples.emplace_back(n, 1.0);
  for (std::size_t s = 1; s < n_samples; ++s) {
    Vector d(n);
    for (double& x : d) x = std::exp(kLogLow + (kLogHigh - kLogLow) * unit_uniform(rng));
    samples.push_back(std::move(d));
  }

  DStabilityProbe out;
  out.samples_tested = samples.size();
  std::size_t worst = 0;
  std::vector<Eval> evals(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) evals[s] = evaluate(b, samples[s]);
  bool found = false;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (evals[s].min_re < evals[worst].min_re) worst = s;
    if (evals[s].min_re < -1e-9 * evals[s].scale) found = true;
  }

  Vector d = samples[worst];
  double f = evals[worst].min_re;
  for (int sweep = 0; sweep < 200; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (double factor : {2.0, 0.5}) {
        Vector trial = d;
        trial[i] = std::clamp(trial[i] * factor, kDMin, kDMax);
        if (trial[i] == d[i]) continue;
        const Eval e = evaluate(b, trial);
        ++out.refinement_evaluations;
        if (e.min_re < f) {
          d = std::move(trial);
          f = e.min_re;
          improved = true;
          if (e.min_re < -1e-9 * e.scale) found = true;
          break;
        }
      }
    }
    if (!improved) break;
  }

  out.worst_d = std::move(d);
  out.worst_min_real_part = f;
  out.counterexample_found = found;
  return out;
}

std::optional<Vector> lyapunov_diagonal_search(const Matrix& b, int iters) {
  require_square(b, "lyapunov_diagonal_search");
  const std::size_t n = b.rows();
  if (n == 0) return std::nullopt;
  const double threshold = 1e-9 * std::max(1.0, frobenius_norm(b));

  // lambda_min(B^T D + D B) and its unit eigenvector.
  auto objective = [&](const Vector& d, Vector* u) {
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s(i, j) = b(j, i) * d[j] + d[i] * b(i, j);
    const SymmetricEigen eig = symmetric_eigen(s);
    if (u) {
      u->resize(n);
      for (std::size_t i = 0; i < n; ++i) (*u)[i] = eig.vectors(i, 0);
    }
    return eig.values.front();
  };

  Vector d(n, 1.0 / double(n));
  Vector u;
  double f = objective(d, &u);
  double step = 0.5 / (double(n) * std::max(frobenius_norm(b), 1e-300));
  for (int it = 0; it < iters && f <= threshold; ++it) {
    const Vector bu = multiply(b, u);
    Vector trial(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      trial[i] = std::max(d[i] + step * 2.0 * u[i] * bu[i], 1e-12);
      sum += trial[i];
    }
    for (double& x : trial) x /= sum;
    Vector tu;
    const double tf = objective(trial, &tu);
    if (tf > f) {
      d = std::move(trial);
      u = std::move(tu);
      f = tf;
      step *= 1.5;
    } else {
      step *= 0.5;
      if (step < 1e-18) break;
    }
  }
  if (f > threshold) return d;
  return std::nullopt;
}

}  // namespace mstab
