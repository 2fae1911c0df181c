#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mstab/error.hpp"
#include "mstab/kernels.hpp"
#include "mstab/linalg.hpp"

namespace mstab {

Matrix hessenberg(const Matrix& m) {
  require_square(m, "hessenberg");
  const std::size_t n = m.rows();
  Matrix h = m;
  if (n < 3) return h;

  const auto& k = kernels::active();
  Vector u(n), w(n);
  for (std::size_t col = 0; col + 2 < n; ++col) {
    const std::size_t len = n - col - 1;
    double scale = 0.0;
    for (std::size_t i = 0; i < len; ++i) scale = std::max(scale, std::abs(h(col + 1 + i, col)));
    if (scale == 0.0) continue;
    double sq = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      u[i] = h(col + 1 + i, col) / scale;
      sq += u[i] * u[i];
    }
    const double alpha = (u[0] > 0.0 ? -1.0 : 1.0) * std::sqrt(sq);
    u[0] -= alpha;
    const double utu = k.sum_squares(u.data(), len);
    if (utu == 0.0) continue;
    const double tau = 2.0 / utu;

    // Left: rows col+1.. of h, columns col.. (row-wise axpy keeps access contiguous).
    const std::size_t width = n - col;
    std::fill(w.begin(), w.begin() + width, 0.0);
    for (std::size_t i = 0; i < len; ++i) k.axpy(u[i], &h(col + 1 + i, col), w.data(), width);
    for (std::size_t i = 0; i < len; ++i) k.axpy(-tau * u[i], w.data(), &h(col + 1 + i, col), width);

    // Right: all rows, columns col+1..
    for (std::size_t i = 0; i < n; ++i) {
      double* r = &h(i, col + 1);
      const double s = k.dot(r, u.data(), len);
      k.axpy(-tau * s, u.data(), r, len);
    }

    h(col + 1, col) = alpha * scale;
    for (std::size_t i = col + 2; i < n; ++i) h(i, col) = 0.0;
  }
  return h;
}

namespace {

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr lineage),
// eigenvalues only. Writes real parts to re, imaginary parts to im.
void hessenberg_qr(Matrix& h, double tol, Vector& re, Vector& im) {
  const int nn = static_cast<int>(h.rows());
  const double eps = std::max(tol, std::numeric_limits<double>::epsilon());
  const int budget = 30 * nn;
  int total_iter = 0;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(h(i, j));

  int n = nn - 1;
  const int low = 0;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, t, w, x, y;
  int iter = 0;

  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(h(l, l - 1)) <= eps * s) break;
      --l;
    }

    if (l == n) {
      h(n, n) += exshift;
      re[n] = h(n, n);
      im[n] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = h(n, n - 1) * h(n - 1, n);
      p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      h(n, n) += exshift;
      h(n - 1, n - 1) += exshift;
      x = h(n, n);
      if (q >= 0) {
        z = (p >= 0) ? p + z : p - z;
        re[n - 1] = x + z;
        re[n] = re[n - 1];
        if (z != 0.0) re[n] = x - w / z;
        im[n - 1] = 0.0;
        im[n] = 0.0;
      } else {
        re[n - 1] = x + p;
        re[n] = x + p;
        im[n - 1] = z;
        im[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      if (++total_iter > budget)
        throw ConvergenceError("QR iteration did not converge within " + std::to_string(budget) +
                               " steps; the matrix is likely ill-conditioned");
      x = h(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = h(n - 1, n - 1);
        w = h(n, n - 1) * h(n - 1, n);
      }
      // Exceptional shifts.
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i) h(i, i) -= x;
        s = std::abs(h(n, n - 1)) + std::abs(h(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = low; i <= n; ++i) h(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      int m = n - 2;
      while (m >= l) {
        z = h(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - z - r - s;
        r = h(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            eps * (std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1)))))
          break;
        --m;
      }

      for (int i = m + 2; i <= n; ++i) {
        h(i, i - 2) = 0.0;
        if (i > m + 2) h(i, i - 3) = 0.0;
      }

      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = notlast ? h(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s != 0.0) {
          if (k != m)
            h(k, k - 1) = -s * x;
          else if (l != m)
            h(k, k - 1) = -h(k, k - 1);
          p += s;
          x = p / s;
          y = q / s;
          z = r / s;
          q /= p;
          r /= p;

          for (int j = k; j < nn; ++j) {
            p = h(k, j) + q * h(k + 1, j);
            if (notlast) {
              p += r * h(k + 2, j);
              h(k + 2, j) -= p * z;
            }
            h(k, j) -= p * x;
            h(k + 1, j) -= p * y;
          }
          const int top = std::min(n, k + 3);
          for (int i = 0; i <= top; ++i) {
            p = x * h(i, k) + y * h(i, k + 1);
            if (notlast) {
              p += z * h(i, k + 2);
              h(i, k + 2) -= p * r;
            }
            h(i, k) -= p;
            h(i, k + 1) -= p * q;
          }
        }
      }
    }
  }
  (void)t;
}

}  // namespace

Spectrum spectrum(const Matrix& m, double tol) {
  require_square(m, "spectrum");
  if (!(tol > 0.0)) throw DomainError("spectrum: tolerance must be positive");
  if (!all_finite(m)) throw DomainError("spectrum: matrix has non-finite entries");
  const std::size_t n = m.rows();

  Matrix h = hessenberg(m);
  Vector re(n), im(n);
  hessenberg_qr(h, tol, re, im);

  Spectrum out;
  out.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex lambda(re[i], im[i]);
    if (std::abs(lambda.imag()) <= kRealSnap * (1.0 + std::abs(lambda))) lambda = {lambda.real(), 0.0};
    out.values.push_back(lambda);
  }
  std::sort(out.values.begin(), out.values.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

double Spectrum::min_real() const {
  double out = std::numeric_limits<double>::infinity();
  for (const Complex& c : values) out = std::min(out, c.real());
  return out;
}

Complex Spectrum::min_real_witness() const {
  if (values.empty()) return {};
  Complex best = values.front();
  for (const Complex& c : values)
    if (c.real() < best.real() || (c.real() == best.real() && c.imag() > best.imag())) best = c;
  return best;
}

double Spectrum::max_abs() const {
  double out = 0.0;
  for (const Complex& c : values) out = std::max(out, std::abs(c));
  return out;
}

Complex Spectrum::sum() const {
  Complex s{};
  for (const Complex& c : values) s += c;
  return s;
}

Complex Spectrum::product() const {
  Complex s{1.0, 0.0};
  for (const Complex& c : values) s *= c;
  return s;
}

double spectral_radius(const Matrix& m) { return spectrum(m).max_abs(); }

double spectrum_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  std::vector<bool> used_a(n, false), used_b(n, false);
  double worst = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used_b[j]) continue;
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = used_b[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace mstab
