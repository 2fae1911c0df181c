#include "mstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mstab/error.hpp"

namespace mstab {

namespace {

bool nonnegative(const Vector& x) {
  return std::all_of(x.begin(), x.end(), [](double a) { return a >= 0.0; });
}

bool positive(const Vector& x) {
  return std::all_of(x.begin(), x.end(), [](double a) { return a > 0.0; });
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void dump_matrix(std::ostringstream& os, const char* name, const Matrix& m) {
  os << name << " =\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << " ";
    for (std::size_t j = 0; j < m.cols(); ++j) os << ' ' << num(m(i, j));
    os << '\n';
  }
}

void dump_vector(std::ostringstream& os, const char* name, const Vector& x) {
  os << name << " =";
  for (double a : x) os << ' ' << num(a);
  os << '\n';
}

[[noreturn]] void violation(const std::string& what, const Matrix& h, const Vector& v, const Vector& w,
                            const StabilityReport& r) {
  std::ostringstream os;
  os << what << "\n";
  dump_matrix(os, "H", h);
  dump_vector(os, "v", v);
  dump_vector(os, "w", w);
  os << "spectrum =";
  for (const Complex& c : r.spectrum.values) os << " (" << num(c.real()) << ", " << num(c.imag()) << ")";
  os << "\nmin_real_part = " << num(r.min_real_part) << ", margin = " << num(r.margin) << "\nfired:";
  for (const auto& id : r.fired()) os << ' ' << id;
  throw TheoryViolation(os.str());
}

Matrix diagonal_scaled_rows(const Vector& d, const Matrix& m) {
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) *= d[i];
  return out;
}

bool half_dominates(const Matrix& h, const Vector& v, const Vector& w, double& slack) {
  slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < h.cols(); ++j) slack = std::min(slack, 2.0 * h(i, j) - v[i] * w[j]);
  return slack >= 0.0;
}

}  // namespace

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::StrictlyStable:
      return "StrictlyStable";
    case Verdict::MarginallyStable:
      return "MarginallyStable";
    case Verdict::Unstable:
      return "Unstable";
  }
  return "?";
}

std::vector<std::string> StabilityReport::fired() const {
  std::vector<std::string> out;
  for (const auto& c : clauses)
    if (c.fired) out.push_back(c.id);
  return out;
}

const ClauseEvidence* StabilityReport::clause(const std::string& id) const {
  for (const auto& c : clauses)
    if (c.id == id) return &c;
  return nullptr;
}

StabilityReport classify(const Matrix& m, double relative_margin) {
  require_square(m, "classify");
  if (m.rows() == 0) throw DomainError("classify: empty matrix");
  if (!(relative_margin >= 0.0)) throw DomainError("classify: margin must be nonnegative");
  StabilityReport r;
  r.spectrum = spectrum(m);
  r.margin = relative_margin * frobenius_norm(m);
  r.min_real_part = r.spectrum.min_real();
  r.witness = r.spectrum.min_real_witness();
  if (r.min_real_part > r.margin)
    r.verdict = Verdict::StrictlyStable;
  else if (r.min_real_part < -r.margin)
    r.verdict = Verdict::Unstable;
  else
    r.verdict = Verdict::MarginallyStable;
  return r;
}

Matrix default_fan_matrix(const Matrix& h, const Vector& v, const Vector& w) {
  const std::size_t n = h.rows();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = h(i, j) - v[i] * w[j];
      k(i, j) = i == j ? std::max(d, 0.0) : std::abs(d);
    }
  return k;
}

StabilityReport check_criteria(const RankOneSystem& sys, const std::optional<Matrix>& k_in,
                               const Tolerances& tol) {
  const SingularMMatrix& base = sys.base;
  if (!base.geometrically_simple())
    throw HypothesisError("zero is not a geometrically simple eigenvalue of A (geometric multiplicity " +
                          std::to_string(base.geo_mult_zero) + "): A + v w^T is singular for every v, w");
  const std::size_t n = sys.size();
  const Matrix& h = base.h;
  const Matrix& a = base.a;
  const Vector& v = sys.v;
  const Vector& w = sys.w;
  const double wv = dot(w, v);
  const bool v_nonneg = nonnegative(v), w_nonneg = nonnegative(w);
  const bool v_pos = positive(v), w_pos = positive(w);
  const double nv = norm2(v), nw = norm2(w), na = frobenius_norm(a);

  StabilityReport r = classify(sys.b, tol.margin);

  {
    ClauseEvidence c{"i-a"};
    c.fired = n == 2 && v_nonneg && w_nonneg && base.alg_mult_zero == 1;
    c.values = {{"n", double(n)}, {"alg_mult_zero", double(base.alg_mult_zero)}};
    c.detail = n != 2 ? "n != 2" : !(v_nonneg && w_nonneg) ? "v or w has a negative entry"
               : c.fired                                   ? "zero is algebraically simple"
                                                           : "zero is not algebraically simple";
    r.clauses.push_back(std::move(c));
  }
  {
    ClauseEvidence c{"i-b"};
    c.fired = n == 2 && v_nonneg && w_nonneg && wv > 0.0;
    c.values = {{"wTv", wv}};
    c.detail = n != 2 ? "n != 2" : !(v_nonneg && w_nonneg) ? "v or w has a negative entry"
               : c.fired                                   ? "w^T v > 0"
                                                           : "w^T v <= 0";
    r.clauses.push_back(std::move(c));
  }
  {
    ClauseEvidence c{"ii"};
    const double av = norm2(multiply(a, v));
    const double atw = norm2(multiply_transposed(a, w));
    const bool right = av <= tol.eigvec * na * nv;
    const bool left = atw <= tol.eigvec * na * nw;
    c.fired = (right || left) && wv > 0.0;
    c.values = {{"norm_Av", av}, {"norm_ATw", atw}, {"wTv", wv}};
    c.detail = !(right || left) ? "neither A v nor w^T A vanishes"
               : wv > 0.0       ? (right ? "A v = 0" : "w^T A = 0")
                                : "eigenvector case with w^T v <= 0";
    r.clauses.push_back(std::move(c));
  }
  {
    ClauseEvidence c{"iii"};
    const bool normal = is_normal(a);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(v[i] - w[i]));
    const bool equal = diff <= 1e-12 * std::max({1.0, nv, nw});
    c.fired = normal && equal;
    c.values = {{"max_abs_v_minus_w", diff}};
    c.detail = !normal ? "A is not normal" : equal ? "A normal, w = v" : "w != v";
    r.clauses.push_back(std::move(c));
  }
  {
    ClauseEvidence c{"iv"};
    double slack = -std::numeric_limits<double>::infinity();
    const bool pos = v_pos && w_pos;
    const bool dom = pos && half_dominates(h, v, w, slack);
    c.fired = dom;
    if (pos) c.values = {{"min_2h_minus_vw", slack}};
    c.detail = !pos ? "v or w not strictly positive" : dom ? "2 h_ij >= v_i w_j" : "2 h_ij < v_i w_j somewhere";
    r.clauses.push_back(std::move(c));
  }
  {
    ClauseEvidence c{"v"};
    Matrix k = k_in ? *k_in : default_fan_matrix(h, v, w);
    if (k.rows() != n || k.cols() != n) throw DomainError("clause v: K must be " + std::to_string(n) + "x" + std::to_string(n));
    if (!all_finite(k)) throw DomainError("clause v: K must be finite");
    bool nonneg = true, dominates = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (k(i, j) < 0.0) nonneg = false;
        const double d = h(i, j) - v[i] * w[j];
        if ((i == j ? d : std::abs(d)) > k(i, j)) dominates = false;
      }
    if (nonneg && dominates) {
      const double rho_k = spectral_radius_nonneg(k);
      double slack = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i)
        slack = std::min(slack, base.rho + k(i, i) + v[i] * w[i] - rho_k - h(i, i));
      c.fired = slack > 1e-12 * std::max(1.0, base.rho + rho_k);
      c.values = {{"rho_K", rho_k}, {"min_slack", slack}};
      c.detail = c.fired ? "Fan inequality holds for every i" : "Fan inequality fails";
    } else {
      c.detail = !nonneg ? "K has a negative entry" : "K does not dominate H - v w^T";
    }
    c.matrix = std::move(k);
    r.clauses.push_back(std::move(c));
  }
  {
    ClauseEvidence c{"vi"};
    if (!sys.symmetric_base) {
      c.detail = "A is not symmetric";
    } else if (!(v_nonneg && w_nonneg)) {
      c.detail = "v or w has a negative entry";
    } else if (!sys.alpha || !sys.tau) {
      c.detail = "alpha or tau undefined (v = 0, w = 0 or A = 0)";
    } else if (*sys.alpha >= 1.0) {
      c.detail = "v and w both parallel to z";
      c.values = {{"alpha", *sys.alpha}};
    } else {
      const double lhs = nv * nw / 2.0;
      const double rhs = std::sqrt(*sys.alpha / (1.0 - *sys.alpha)) * *sys.tau;
      c.fired = lhs < rhs;
      c.values = {{"alpha", *sys.alpha}, {"tau", *sys.tau}, {"half_norm_product", lhs}, {"bound", rhs}};
      c.detail = c.fired ? "||v|| ||w|| / 2 below the crossing bound" : "||v|| ||w|| / 2 above the crossing bound";
    }
    r.clauses.push_back(std::move(c));
  }

  r.guaranteed = sys.nzp && !r.fired().empty();
  if (r.guaranteed && r.verdict == Verdict::Unstable)
    violation("sufficient condition fired with NZP but B is unstable", h, v, w, r);
  return r;
}

Spectrum eigenvector_perturbation_spectrum(const SingularMMatrix& base, const Vector& w) {
  if (!base.geometrically_simple() || !base.z_right)
    throw HypothesisError("no Perron vector: zero is not a geometrically simple eigenvalue of A");
  const Vector& v = *base.z_right;
  if (w.size() != v.size()) throw DomainError("eigenvector_perturbation_spectrum: w has the wrong length");
  const double wv = dot(w, v);

  Spectrum pred = base.spectrum_a;
  auto zero = std::min_element(pred.values.begin(), pred.values.end(),
                               [](const Complex& x, const Complex& y) { return std::abs(x) < std::abs(y); });
  *zero = wv;
  std::sort(pred.values.begin(), pred.values.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });

  Matrix b = base.a;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) += v[i] * w[j];
  const Spectrum actual = spectrum(b);
  // A defective zero of multiplicity m perturbs at the eps^(1/m) scale.
  const double m = double(std::max<std::size_t>(1, base.alg_mult_zero));
  const double bound = std::max(1e-7, 10.0 * std::pow(std::numeric_limits<double>::epsilon(), 1.0 / m)) *
                       std::max(1.0, frobenius_norm(b));
  const double dist = spectrum_distance(pred.values, actual.values);
  if (!(dist <= bound)) {
    StabilityReport r;
    r.spectrum = actual;
    violation("eigenvector perturbation: predicted spectrum differs by " + num(dist), base.h, v, w, r);
  }
  return pred;
}

StabilityReport normal_case_check(const Matrix& h, const Vector& v, const Matrix& c, const Tolerances& tol) {
  require_square(h, "normal_case_check");
  const std::size_t n = h.rows();
  if (n == 0) throw DomainError("normal_case_check: empty matrix");
  if (v.size() != n) throw DomainError("normal_case_check: v has the wrong length");
  if (c.rows() != n || c.cols() != n) throw DomainError("normal_case_check: C has the wrong shape");
  if (!all_finite(h) || !all_finite(v) || !all_finite(c)) throw DomainError("normal_case_check: non-finite input");
  if (!is_normal(h)) throw HypothesisError("H is not normal");
  if (!is_symmetric(c, tol.symmetric)) throw DomainError("C is not symmetric");
  if (!(symmetric_eigen(c).values.front() > tol.rank * frobenius_norm(c)))
    throw DomainError("C is not positive definite");

  const Spectrum sh = spectrum(h);
  const double rho = sh.max_abs();
  const Vector vals = symmetric_eigen(add(h, transpose(h))).values;
  const double rho_sym = std::max(std::abs(vals.front()), std::abs(vals.back()));
  double max_re = 0.0;
  for (const Complex& mu : sh.values) max_re = std::max(max_re, std::abs(mu.real()));
  if (std::abs(rho_sym - 2.0 * max_re) > 1e-8 * std::max(1.0, rho))
    throw TheoryViolation("rho(H + H^T) = " + num(rho_sym) + " but 2 max|Re mu| = " + num(2.0 * max_re));

  bool rho_in = false;
  for (const Complex& mu : sh.values)
    if (std::abs(mu - rho) <= 1e-9 * std::max(1.0, rho)) rho_in = true;

  Matrix a = scaled(h, -1.0);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += rho;
  Matrix b = a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) += v[i] * v[j];

  StabilityReport r = classify(multiply(c, b), tol.margin);

  ClauseEvidence c1{"normal-i"};
  if (rho_in) {
    const std::size_t geo = n - numerical_rank(a, tol.rank);
    const Vector z = smallest_right_singular_vector(a);
    const double vz = dot(v, z);
    c1.fired = geo == 1 && std::abs(vz) > tol.nzp * norm2(v);
    c1.values = {{"rho", rho}, {"geo_mult", double(geo)}, {"vTz", vz}};
    c1.detail = geo != 1 ? "rho(H) not geometrically simple" : c1.fired ? "v^T z != 0" : "v^T z = 0";
  } else {
    c1.detail = "rho(H) not an eigenvalue";
  }
  ClauseEvidence c2{"normal-ii"};
  c2.fired = !rho_in;
  c2.values = {{"rho", rho}};
  c2.detail = rho_in ? "rho(H) is an eigenvalue" : "rho(H) not an eigenvalue";
  r.clauses.push_back(std::move(c1));
  r.clauses.push_back(std::move(c2));

  r.guaranteed = !r.fired().empty();
  if (r.guaranteed && r.verdict == Verdict::Unstable)
    violation("normal case: C B is unstable", h, v, v, r);
  return r;
}

Vector symmetrizing_scaling(const Vector& v, const Vector& w) {
  if (v.size() != w.size()) throw DomainError("symmetrizing_scaling: length mismatch");
  Vector e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0 || w[i] == 0.0)
      throw DomainError("E = diag(w) diag(v)^-1 undefined: zero entry at index " + std::to_string(i));
    e[i] = w[i] / v[i];
    if (!(e[i] > 0.0) || !std::isfinite(e[i]))
      throw DomainError("E = diag(w) diag(v)^-1 is not a positive diagonal at index " + std::to_string(i));
  }
  return e;
}

StabilityReport corollary_clauses(const RankOneSystem& sys, const Tolerances& tol) {
  const SingularMMatrix& base = sys.base;
  if (!base.geometrically_simple())
    throw HypothesisError("zero is not a geometrically simple eigenvalue of A (geometric multiplicity " +
                          std::to_string(base.geo_mult_zero) + ")");
  const std::size_t n = sys.size();
  const Vector& v = sys.v;
  const Vector& w = sys.w;
  const bool v_nonneg = nonnegative(v), w_nonneg = nonnegative(w);
  const bool v_pos = positive(v), w_pos = positive(w);

  StabilityReport r = classify(sys.b, tol.margin);

  {
    ClauseEvidence c{"cor-i-a"};
    c.fired = n == 2 && v_nonneg && w_nonneg && base.irreducible;
    c.detail = n != 2 ? "n != 2" : !(v_nonneg && w_nonneg) ? "v or w has a negative entry"
               : base.irreducible                          ? "A irreducible"
                                                           : "A reducible";
    r.clauses.push_back(std::move(c));
  }
  {
    ClauseEvidence c{"cor-i-b"};
    c.fired = n == 2 && v_pos && w_pos;
    c.detail = n != 2 ? "n != 2" : c.fired ? "v, w > 0" : "v or w not strictly positive";
    r.clauses.push_back(std::move(c));
  }
  {
    ClauseEvidence c{"cor-ii-c"};
    if (v_pos && w_pos) {
      const Vector e = symmetrizing_scaling(v, w);
      const Matrix ea = diagonal_scaled_rows(e, base.a);
      c.fired = is_symmetric(ea, tol.symmetric);
      c.matrix = diagonal(e);
      c.detail = c.fired ? "E A symmetric" : "E A not symmetric";

      if (c.fired) {
        Matrix s = base.a;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) s(i, j) *= std::sqrt(e[i] / e[j]);
        if (!is_symmetric(s, 1e-9)) {
          StabilityReport dumped = r;
          dumped.clauses.push_back(c);
          violation("E A symmetric but E^1/2 A E^-1/2 is not", base.h, v, w, dumped);
        }
      }

      // Any positive diagonal E' with E'A and E' v w^T symmetric is a multiple
      // of E. Candidates: I and diag(z_l / z_r), the only diagonal that can
      // symmetrize A when zero is simple.
      std::vector<Vector> candidates{Vector(n, 1.0)};
      if (base.z_left && base.z_right && positive(*base.z_left) && positive(*base.z_right)) {
        Vector d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = (*base.z_left)[i] / (*base.z_right)[i];
        candidates.push_back(std::move(d));
      }
      const Matrix vw = outer(v, w);
      std::size_t symmetrizers = 0;
      for (const Vector& d : candidates)
        if (is_symmetric(diagonal_scaled_rows(d, base.a), 1e-3 * tol.symmetric) &&
            is_symmetric(diagonal_scaled_rows(d, vw), 1e-3 * tol.symmetric))
          ++symmetrizers;
      c.values = {{"candidate_symmetrizers", double(symmetrizers)}};
      if (symmetrizers > 0 && !c.fired) {
        StabilityReport dumped = r;
        dumped.clauses.push_back(c);
        violation("a diagonal symmetrizer exists but E = diag(w) diag(v)^-1 fails", base.h, v, w, dumped);
      }
    } else {
      c.detail = "requires v, w > 0";
    }
    r.clauses.push_back(std::move(c));
  }
  {
    ClauseEvidence c{"cor-iii"};
    double slack = -std::numeric_limits<double>::infinity();
    const bool pos = v_pos && w_pos;
    c.fired = pos && half_dominates(base.h, v, w, slack);
    if (pos) c.values = {{"min_2h_minus_vw", slack}};
    if (c.fired) c.values.push_back({"h_matrix", is_h_matrix_positive_diagonal(sys.b) ? 1.0 : 0.0});
    c.detail = !pos ? "v or w not strictly positive" : c.fired ? "2 h_ij >= v_i w_j" : "2 h_ij < v_i w_j somewhere";
    r.clauses.push_back(std::move(c));
  }

  r.guaranteed = sys.nzp && !r.fired().empty();
  if (r.guaranteed && r.verdict == Verdict::Unstable)
    violation("corollary condition fired with NZP but B is unstable", base.h, v, w, r);
  return r;
}

}  // namespace mstab
