#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "morphdecomp/decomposition.hpp"
#include "morphdecomp/errors.hpp"
#include "oracles.hpp"

using namespace morphdecomp;

namespace {

GammaPoint random_feasible(const GammaRectangle& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {std::clamp(r.lo_minus + u(rng) * (r.hi_minus - r.lo_minus), r.lo_minus, r.hi_minus),
          std::clamp(r.lo_plus + u(rng) * (r.hi_plus - r.lo_plus), r.lo_plus, r.hi_plus)};
}

void check_components(const DecompositionResult& d, double si, double ui_y, double ui_z, double ci, double tol) {
  CHECK(std::abs(d.si - si) <= tol);
  CHECK(std::abs(d.ui_y - ui_y) <= tol);
  CHECK(std::abs(d.ui_z - ui_z) <= tol);
  CHECK(std::abs(d.ci - ci) <= tol);
}

double max_component_gap(const DecompositionResult& a, const DecompositionResult& b) {
  return std::max({std::abs(a.si - b.si), std::abs(a.ui_y - b.ui_y), std::abs(a.ui_z - b.ui_z),
                   std::abs(a.ci - b.ci)});
}

// AND gate, frozen from an independent brute-force grid at resolutions 2001
// and 4001 (both agree to 1e-8): SI = I(X:Y) = 0.311278124459, CI = 0.5.
constexpr double kAndShared = 0.311278124459;
constexpr double kAndComplementary = 0.5;

}  // namespace

TEST_CASE("gamma_bounds") {
  SUBCASE("uniform") {
    const GammaRectangle r = gamma_bounds(Pmf3::uniform());
    CHECK(r == GammaRectangle{-0.125, 0.125, -0.125, 0.125});
  }
  SUBCASE("xor") {
    const GammaRectangle r = gamma_bounds(oracle::xor_triple());
    CHECK(r == GammaRectangle{-0.25, 0.0, 0.0, 0.25});
  }
  SUBCASE("zero cells on both sides give a degenerate interval") {
    const GammaRectangle r = gamma_bounds(oracle::copy_y_triple());
    CHECK(r.lo_minus == 0.0);
    CHECK(r.hi_minus == 0.0);
    CHECK(r.lo_plus == 0.0);
    CHECK(r.hi_plus == 0.0);
  }
  SUBCASE("origin is always feasible") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
      const GammaRectangle r = gamma_bounds(oracle::random_pmf(rng));
      CHECK(r.lo_minus <= 0.0);
      CHECK(r.hi_minus >= 0.0);
      CHECK(r.lo_plus <= 0.0);
      CHECK(r.hi_plus >= 0.0);
    }
  }
}

TEST_CASE("perturb") {
  SUBCASE("origin is the identity") {
    std::mt19937_64 rng(5);
    const Pmf3 P = oracle::random_pmf(rng);
    CHECK(perturb(P, 0.0, 0.0) == P);
  }
  SUBCASE("uniform shifted by 1/8 on the x=-1 slice") {
    const Pmf3 Q = perturb(Pmf3::uniform(), 0.125, 0.0);
    CHECK(Q(-1, -1, -1) == 0.25);
    CHECK(Q(-1, +1, +1) == 0.25);
    CHECK(Q(-1, -1, +1) == 0.0);
    CHECK(Q(-1, +1, -1) == 0.0);
    for (int y : {-1, 1})
      for (int z : {-1, 1}) CHECK(Q(+1, y, z) == 0.125);
  }
  SUBCASE("outside the rectangle") {
    CHECK_THROWS_AS(perturb(Pmf3::uniform(), 0.13, 0.0), FeasibilityError);
    CHECK_THROWS_AS(perturb(oracle::xor_triple(), 0.0, -0.01), FeasibilityError);
  }
  SUBCASE("property: pairwise marginals are preserved") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
      const Pmf3 P = oracle::random_pmf(rng);
      const Pmf3 Q = perturb(P, random_feasible(gamma_bounds(P), rng));
      for (auto pair : {std::pair{Axis::X, Axis::Y}, std::pair{Axis::X, Axis::Z}}) {
        const auto a = marginal_pair(P, pair.first, pair.second).cells();
        const auto b = marginal_pair(Q, pair.first, pair.second).cells();
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("functional values match the probcore measures of the perturbed joint") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 50; ++k) {
    const Pmf3 P = oracle::random_pmf(rng);
    const GammaPoint g = random_feasible(gamma_bounds(P), rng);
    const Pmf3 Q = perturb(P, g);
    CHECK(std::abs(functional_value(P, Functional::UniqueY, g) -
                   conditional_mutual_information(Q, Axis::X, Axis::Y, Axis::Z)) <= 1e-12);
    CHECK(std::abs(functional_value(P, Functional::UniqueZ, g) -
                   conditional_mutual_information(Q, Axis::X, Axis::Z, Axis::Y)) <= 1e-12);
    CHECK(std::abs(functional_value(P, Functional::Complementary, g) -
                   mutual_information(Q, Axis::X, {Axis::Y, Axis::Z})) <= 1e-12);
    CHECK(std::abs(functional_value(P, Functional::SharedInformation, g) + co_information(Q)) <= 1e-12);
  }
}

TEST_CASE("decompose: canonical gates") {
  SUBCASE("xor is purely complementary") {
    const DecompositionResult d = decompose(oracle::xor_triple());
    check_components(d, 0.0, 0.0, 0.0, 1.0, 1e-3);
    CHECK(d.mi_total == doctest::Approx(1.0));
  }
  SUBCASE("copy of Y is purely unique to Y") {
    check_components(decompose(oracle::copy_y_triple()), 0.0, 1.0, 0.0, 0.0, 1e-3);
  }
  SUBCASE("and gate") {
    check_components(decompose(oracle::and_triple()), kAndShared, 0.0, 0.0, kAndComplementary, 1e-4);
  }
  SUBCASE("uniform is all zero") {
    check_components(decompose(Pmf3::uniform()), 0.0, 0.0, 0.0, 0.0, 1e-9);
  }
  SUBCASE("all equal is purely shared") {
    check_components(decompose(oracle::all_equal_triple()), 1.0, 0.0, 0.0, 0.0, 1e-3);
  }
}

TEST_CASE("decompose_oracle") {
  const DecompositionResult x = decompose_oracle(oracle::xor_triple(), 1001);
  CHECK(std::abs(x.ci - 1.0) <= 1e-4);
  check_components(decompose_oracle(Pmf3::uniform(), 101), 0.0, 0.0, 0.0, 0.0, 1e-12);
  check_components(decompose_oracle(oracle::and_triple(), 1001), kAndShared, 0.0, 0.0, kAndComplementary, 1e-4);
  CHECK_THROWS_AS(decompose_oracle(Pmf3::uniform(), 100), ArgumentError);
}

TEST_CASE("decompose agrees with the brute-force oracle") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 8; ++k) {
    const Pmf3 P = oracle::random_pmf(rng);
    CHECK(max_component_gap(decompose(P), decompose_oracle(P, 1001)) <= 1e-4);
  }
}

TEST_CASE("property: nonnegativity and decomposition identities") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 40; ++k) {
    const Pmf3 P = oracle::random_pmf(rng);
    const DecompositionResult d = decompose(P);
    CHECK(d.si >= 0.0);
    CHECK(d.ui_y >= 0.0);
    CHECK(d.ui_z >= 0.0);
    CHECK(d.ci >= 0.0);
    CHECK(d.residual_sum <= kConsistencyTolerance);
    CHECK(d.residual_pair_y <= kConsistencyTolerance);
    CHECK(d.residual_pair_z <= kConsistencyTolerance);
    CHECK(d.residual_cond <= kConsistencyTolerance);
    // Residual fields are recomputable from the components.
    CHECK(std::abs(d.residual_sum - std::abs(d.mi_total - (d.si + d.ui_y + d.ui_z + d.ci))) <= 1e-15);
  }
}

TEST_CASE("property: components are constant on the marginal-preserving set") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 10; ++k) {
    const Pmf3 P = oracle::random_pmf(rng);
    const DecompositionResult base = decompose(P);
    const Pmf3 Q = perturb(P, random_feasible(gamma_bounds(P), rng));
    const DecompositionResult moved = decompose(Q);
    // SI and the UIs depend only on the pair marginals; CI shifts by the change in I(X:(Y,Z)).
    CHECK(std::abs(base.si - moved.si) <= 5e-4);
    CHECK(std::abs(base.ui_y - moved.ui_y) <= 5e-4);
    CHECK(std::abs(base.ui_z - moved.ui_z) <= 5e-4);
  }
}

TEST_CASE("property: oracle refinement converges monotonically") {
  // Grids at 101, 401, 1601 are nested, so the optimum can only improve, and
  // the second improvement is smaller than the first.
  std::mt19937_64 rng(37);
  for (int k = 0; k < 4; ++k) {
    const Pmf3 P = oracle::random_pmf(rng);
    const double v101 = decompose_oracle(P, 101).ui_y;
    const double v401 = decompose_oracle(P, 401).ui_y;
    const double v1601 = decompose_oracle(P, 1601).ui_y;
    const double first = v101 - v401;
    const double second = v401 - v1601;
    CHECK(first >= 0.0);
    CHECK(second >= 0.0);
    if (first > 1e-14) {
      CHECK(second < first);
    } else {
      CHECK(second <= first);
    }
  }
}

TEST_CASE("degenerate rectangles") {
  // Copy channel: both gamma intervals collapse to the origin.
  const DecompositionResult d = decompose(oracle::copy_y_triple());
  CHECK(d.argmin_ci == GammaPoint{0.0, 0.0});
  CHECK(d.argmin_ui_y == GammaPoint{0.0, 0.0});

  // Only the x = +1 slice has zeros on both sides.
  Pmf3::Cells c{};
  c.fill(0.125);
  c[Pmf3::index(1, 0, 1)] = 0.0;
  c[Pmf3::index(1, 1, 1)] = 0.25;
  c[Pmf3::index(1, 0, 0)] = 0.0;
  c[Pmf3::index(1, 1, 0)] = 0.25;
  const Pmf3 P(c);
  const GammaRectangle r = gamma_bounds(P);
  CHECK(r.lo_plus == 0.0);
  CHECK(r.hi_plus == 0.0);
  CHECK(r.hi_minus > r.lo_minus);
  const DecompositionResult one_axis = decompose(P);
  CHECK(one_axis.max_residual() <= kConsistencyTolerance);
  CHECK(max_component_gap(one_axis, decompose_oracle(P, 1001)) <= 1e-4);
}

TEST_CASE("decompose is deterministic") {
  std::mt19937_64 rng(41);
  const Pmf3 P = oracle::random_pmf(rng);
  const DecompositionResult a = decompose(P);
  const DecompositionResult b = decompose(P);
  CHECK(a.si == b.si);
  CHECK(a.ui_y == b.ui_y);
  CHECK(a.ui_z == b.ui_z);
  CHECK(a.ci == b.ci);
  CHECK(a.argmin_ci == b.argmin_ci);
}

TEST_CASE("optimization plan validation") {
  OptimizationPlan plan;
  CHECK_NOTHROW(plan.validate());
  plan.resolution = 1;
  CHECK_THROWS_AS(decompose(Pmf3::uniform(), plan), ArgumentError);
  plan = {};
  plan.refine_points = 20;
  CHECK_THROWS_AS(plan.validate(), ArgumentError);
  plan = {};
  plan.refine_rounds = -1;
  CHECK_THROWS_AS(plan.validate(), ArgumentError);

  // Minimal grid without refinement still runs.
  plan = {};
  plan.resolution = 2;
  plan.refine_rounds = 0;
  CHECK_NOTHROW(decompose(oracle::and_triple(), plan));
}
