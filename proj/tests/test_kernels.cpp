#include <doctest.h>

#include <cmath>
#include <random>

#include "mstab/kernels.hpp"
#include "mstab/linalg.hpp"
#include "support.hpp"

using namespace mstab;
using testing::uniform;

namespace {

double close_to(double a, double b, double scale) { return std::abs(a - b) <= 1e-13 * std::max(1.0, scale); }

}  // namespace

TEST_CASE("every available kernel variant agrees with the scalar reference") {
  const kernels::Table& ref = kernels::scalar_table();
  std::mt19937_64 rng(7);
  for (kernels::Isa isa : kernels::available()) {
    CAPTURE(kernels::isa_name(isa));
    const kernels::Table* t = kernels::table_for(isa);
    REQUIRE(t != nullptr);
    for (std::size_t n = 0; n <= 67; ++n) {
      Vector a(n), b(n), y1(n), y2(n);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = uniform(rng, -1, 1);
        b[i] = uniform(rng, -1, 1);
        y1[i] = y2[i] = uniform(rng, -1, 1);
        scale += std::abs(a[i] * b[i]);
      }
      CHECK(close_to(t->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), scale));
      CHECK(close_to(t->sum_squares(a.data(), n), ref.sum_squares(a.data(), n), double(n)));
      t->axpy(0.75, a.data(), y1.data(), n);
      ref.axpy(0.75, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(close_to(y1[i], y2[i], 1.0));
    }
    for (std::size_t rows : {1u, 3u, 6u, 9u}) {
      for (std::size_t cols : {1u, 4u, 5u, 17u}) {
        const std::size_t ld = cols + 3;
        Vector m(rows * ld), x(cols), out1(rows), out2(rows);
        for (double& e : m) e = uniform(rng, -1, 1);
        for (double& e : x) e = uniform(rng, -1, 1);
        t->gemv(m.data(), rows, cols, ld, x.data(), out1.data());
        ref.gemv(m.data(), rows, cols, ld, x.data(), out2.data());
        for (std::size_t i = 0; i < rows; ++i) CHECK(close_to(out1[i], out2[i], double(cols)));
      }
    }
  }
}

TEST_CASE("scalar variant is always available and listed first") {
  const auto isas = kernels::available();
  REQUIRE(!isas.empty());
  CHECK(isas.front() == kernels::Isa::Scalar);
  CHECK(kernels::table_for(kernels::Isa::Scalar) == &kernels::scalar_table());
}

TEST_CASE("scoped selection restores the previous table") {
  const kernels::Table* before = &kernels::active();
  {
    kernels::ScopedIsa scoped(kernels::Isa::Scalar);
    CHECK(scoped.ok());
    CHECK(kernels::active().isa == kernels::Isa::Scalar);
  }
  CHECK(&kernels::active() == before);
}

TEST_CASE("spectra agree across kernel variants") {
  std::mt19937_64 rng(11);
  const Matrix m = testing::random_matrix(rng, 6);
  Spectrum reference;
  {
    kernels::ScopedIsa scoped(kernels::Isa::Scalar);
    reference = spectrum(m);
  }
  for (kernels::Isa isa : kernels::available()) {
    kernels::ScopedIsa scoped(isa);
    CHECK(spectrum_distance(spectrum(m).values, reference.values) < 1e-10);
  }
}
