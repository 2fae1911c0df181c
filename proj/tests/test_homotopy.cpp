#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mstab/error.hpp"
#include "mstab/homotopy.hpp"
#include "mstab/report.hpp"
#include "support.hpp"

using namespace mstab;

namespace {

RankOneSystem system_of(const Matrix& h, const Vector& v, const Vector& w) { return assemble(build_mmatrix(h), v, w); }

RankOneSystem counterexample_system() {
  const ProblemFile p = counterexample_problem();
  return system_of(p.h, *p.v, *p.w);
}

}  // namespace

TEST_CASE("counterexample path crosses the imaginary axis before t = 1") {
  const HomotopyTrace tr = trace(counterexample_system(), 1.0, 200);
  CHECK(tr.t_grid.size() == 201);
  CHECK(tr.spectra.size() == 201);
  REQUIRE(!tr.crossings.empty());
  for (const Crossing& c : tr.crossings) {
    CHECK(c.t > 0.0);
    CHECK(c.t < 1.0);
  }
  CHECK(tr.crossings.front().into_instability);
  CHECK(tr.min_real_parts.back() < 0.0);
}

TEST_CASE("symmetric bound instance never crosses") {
  const HomotopyTrace tr = trace(system_of(Matrix{{0, 1}, {1, 0}}, {1, 0}, {0, 1}), 1.0, 400);
  CHECK(tr.crossings.empty());
  for (std::size_t k = 1; k < tr.min_real_parts.size(); ++k) CHECK(tr.min_real_parts[k] > 0.0);
  CHECK(std::abs(tr.min_real_parts.front()) < 1e-12);
}

TEST_CASE("trace rejects a non-positive horizon") {
  const RankOneSystem sys = system_of(Matrix{{0, 1}, {1, 0}}, {1, 0}, {0, 1});
  CHECK_THROWS_AS(trace(sys, 0.0), DomainError);
  CHECK_THROWS_AS(trace(sys, -1.0), DomainError);
}

TEST_CASE("gamma interpolates A and B") {
  const RankOneSystem sys = counterexample_system();
  CHECK(max_abs(subtract(gamma_at(sys, 0.0), sys.base.a)) == 0.0);
  CHECK(max_abs(subtract(gamma_at(sys, 1.0), sys.b)) < 1e-15);
}

TEST_CASE("small-t stability") {
  const double t0 = small_t_stability(counterexample_system());
  CHECK(t0 > 0.0);
  CHECK(t0 < 1.0);

  CHECK_THROWS_AS(small_t_stability(system_of(Matrix{{1, 1}, {0, 1}}, {0, 1}, {1, 0})), HypothesisError);
  CHECK(small_t_stability(system_of(Matrix{{0, 1}, {1, 0}}, {1, 1}, {1, 1})) == 1.0);
}

TEST_CASE("crossing bounds") {
  const auto [lo, hi] = crossing_bounds(system_of(Matrix{{0, 1}, {1, 0}}, {1, 0}, {0, 1}));
  CHECK(lo == doctest::Approx(2.0));
  CHECK(hi == doctest::Approx(0.5));

  const auto [lo2, hi2] = crossing_bounds(system_of(Matrix{{0, 1}, {1, 0}}, {2, 0}, {0, 1}));
  CHECK(lo2 == doctest::Approx(lo));
  CHECK(hi2 == doctest::Approx(2 * hi));

  const double s = 1 / std::sqrt(2.0);
  CHECK_THROWS_AS(crossing_bounds(system_of(Matrix{{0, 1}, {1, 0}}, {s, s}, {s, s})), DegenerateError);
  CHECK_THROWS_AS(crossing_bounds(counterexample_system()), HypothesisError);
}

TEST_CASE("imaginary decomposition identity") {
  std::mt19937_64 rng(97);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = testing::pick(rng, 2, 6);
    const RankOneSystem sys = system_of(testing::random_symmetric_irreducible(rng, n),
                                        testing::random_vector(rng, n, 0, 1), testing::random_vector(rng, n, 0, 1));
    CHECK(imaginary_decomposition_residual(sys, 1.0) < 1e-10);
    CHECK(imaginary_decomposition_residual(sys, 1000.0) < 1e-10);
  }
  // v and w orthogonal to z: the first term vanishes.
  CHECK(imaginary_decomposition_residual(system_of(Matrix{{0, 1}, {1, 0}}, {1, -1}, {-1, 1}), 0.7) < 1e-12);
}

TEST_CASE("large-t probe") {
  const RankOneSystem cx = counterexample_system();
  const auto a = large_t_probe(cx, 10.0, 400);
  const auto b = large_t_probe(cx, 10.0, 400);
  CHECK(a == b);

  const auto stable = large_t_probe(system_of(Matrix{{0, 1}, {1, 0}}, {1, 1}, {1, 1}), 5.0, 100);
  REQUIRE(stable);
  CHECK(*stable == 0.0);

  const auto early = large_t_probe(cx, 0.3, 50);
  REQUIRE(early);
  CHECK(*early == 0.0);
}

TEST_CASE("homotopy CSV layout") {
  const HomotopyTrace tr = trace(system_of(Matrix{{0, 1}, {1, 0}}, {1, 0}, {0, 1}), 1.0, 4);
  std::ostringstream os;
  write_csv(os, tr);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,index,re,im,min_real_part");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5 * 2);
}
