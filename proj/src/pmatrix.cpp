#include "mstab/pmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mstab/error.hpp"
#include "mstab/perturbation.hpp"

namespace mstab {

namespace {

// Next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void require_nonnegative(const Vector& x, const char* name) {
  for (double a : x)
    if (a < 0.0) throw HypothesisError(std::string(name) + " has a negative entry");
}

std::string subset_text(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i] + 1);
  return out + "}";
}

}  // namespace

const char* minor_class_name(MinorClass c) noexcept {
  switch (c) {
    case MinorClass::P:
      return "P";
    case MinorClass::P0NotP:
      return "P0_not_P";
    case MinorClass::NotP0:
      return "NotP0";
  }
  return "?";
}

MinorReport principal_minors(const Matrix& m) {
  require_square(m, "principal_minors");
  const std::size_t n = m.rows();
  if (n == 0) throw DomainError("principal_minors: empty matrix");
  if (n > kMinorGuard)
    throw SizeError("principal_minors: n = " + std::to_string(n) + " exceeds the enumeration guard " +
                    std::to_string(kMinorGuard));
  if (!all_finite(m)) throw DomainError("principal_minors: non-finite entry");

  MinorReport r;
  r.n = n;
  r.minors.reserve((std::size_t{1} << n) - 1);
  r.min_minor = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    do {
      const double d = determinant(principal_submatrix(m, idx));
      r.min_minor = std::min(r.min_minor, d);
      r.minors.emplace_back(idx, d);
    } while (next_combination(idx, n));
  }
  r.tolerance = 1e-10 * std::max(1.0, std::pow(frobenius_norm(m), double(n)));
  if (r.min_minor > r.tolerance)
    r.classification = MinorClass::P;
  else if (r.min_minor >= -r.tolerance)
    r.classification = MinorClass::P0NotP;
  else
    r.classification = MinorClass::NotP0;
  return r;
}

bool verify_p0_theorem(const SingularMMatrix& base, const Vector& v, const Vector& w) {
  require_nonnegative(v, "v");
  require_nonnegative(w, "w");
  const RankOneSystem sys = assemble(base, v, w);
  const MinorReport r = principal_minors(sys.b);
  if (r.classification == MinorClass::NotP0) {
    const auto worst = std::min_element(r.minors.begin(), r.minors.end(),
                                        [](const auto& x, const auto& y) { return x.second < y.second; });
    throw TheoryViolation("A + v w^T with v, w >= 0 has a negative principal minor " +
                          std::to_string(worst->second) + " on " + subset_text(worst->first));
  }
  return true;
}

bool verify_p_theorem(const SingularMMatrix& base, const Vector& v, const Vector& w) {
  require_nonnegative(v, "v");
  require_nonnegative(w, "w");
  if (!base.irreducible) throw HypothesisError("A is reducible");
  const RankOneSystem sys = assemble(base, v, w);
  if (!sys.nzp) throw HypothesisError("NZP fails");
  const MinorReport r = principal_minors(sys.b);
  if (r.classification != MinorClass::P) {
    const auto worst = std::min_element(r.minors.begin(), r.minors.end(),
                                        [](const auto& x, const auto& y) { return x.second < y.second; });
    throw TheoryViolation("irreducible A + v w^T with NZP is not a P-matrix: minor " +
                          std::to_string(worst->second) + " on " + subset_text(worst->first));
  }
  return true;
}

}  // namespace mstab
