#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "morphdecomp/errors.hpp"
#include "morphdecomp/sensorimotor.hpp"
#include "oracles.hpp"

using namespace morphdecomp;
using doctest::Approx;

namespace {

// e^x / (e^x + e^-x)
constexpr double kSoftmax1 = 0.8807970780;
constexpr double kSoftmax2 = 0.9820137900;

ModelParams params(double phi, double psi, double omega, double mu = 0.0, double zeta = kDeterministicZeta,
                   double tau = 0.0) {
  ModelParams p;
  p.phi = phi;
  p.psi = psi;
  p.omega = omega;
  p.mu = mu;
  p.zeta = zeta;
  p.tau = tau;
  return p;
}

// 1 - h(1 / (1 + e^{2 * weight})): mutual information of a binary symmetric
// channel driven by a uniform input.
double bsc_information(double weight) { return 1.0 - oracle::binary_entropy(1.0 / (1.0 + std::exp(2.0 * weight))); }

}  // namespace

TEST_CASE("world dynamics kernel") {
  const BinaryKernel flat = world_dynamics(0, 0, 0);
  for (int w : {-1, 1})
    for (int a : {-1, 1})
      for (int wn : {-1, 1}) CHECK(flat.prob(wn, w, a) == 0.5);

  const BinaryKernel follow = world_dynamics(1, 0, 0);
  for (int w : {-1, 1})
    for (int a : {-1, 1}) CHECK(follow.prob(w, w, a) == Approx(kSoftmax1).epsilon(1e-10));

  const BinaryKernel synergy = world_dynamics(0, 0, 2);
  for (int w : {-1, 1})
    for (int a : {-1, 1}) CHECK(synergy.prob(w * a, w, a) == Approx(kSoftmax2).epsilon(1e-10));

  CHECK_THROWS_AS(world_dynamics(-1, 0, 0), ArgumentError);
}

TEST_CASE("sensor, policy and prior kernels") {
  CHECK(sensor_kernel(0).prob(1, -1) == 0.5);
  CHECK(std::abs(sensor_kernel(50).prob(1, 1) - 1.0) <= 1e-12);
  CHECK(std::abs(sensor_kernel(50).prob(-1, -1) - 1.0) <= 1e-12);
  CHECK(sensor_kernel(1).prob(1, 1) == Approx(kSoftmax1).epsilon(1e-10));

  CHECK(policy_kernel(0).prob(-1, 1) == 0.5);
  CHECK(std::abs(policy_kernel(50).prob(-1, -1) - 1.0) <= 1e-12);
  CHECK(policy_kernel(1).prob(1, 1) == Approx(kSoftmax1).epsilon(1e-10));

  CHECK(world_prior(0).prob(1) == 0.5);
  CHECK(world_prior(0).prob(-1) == 0.5);
  CHECK(std::abs(world_prior(50).prob(1) - 1.0) <= 1e-12);
  CHECK(world_prior(1).prob(1) == Approx(kSoftmax1).epsilon(1e-10));

  CHECK_THROWS_AS(sensor_kernel(-0.1), ArgumentError);
  CHECK_THROWS_AS(world_prior(std::nan("")), ArgumentError);
  CHECK_THROWS_AS(world_prior(1).prob(1, 1), ArgumentError);
}

TEST_CASE("kernel rows are validated") {
  CHECK_THROWS_AS(BinaryKernel(1, {{0.5, 0.5}}), ArgumentError);
  CHECK_THROWS_AS(BinaryKernel(0, {{0.5, 0.6}}), NormalizationError);
}

TEST_CASE("compose_joint") {
  SUBCASE("all zero is uniform") {
    const WorldJoint wj = compose_joint(params(0, 0, 0, 0, 0, 0));
    for (double v : wj.joint.cells()) CHECK(v == Approx(0.125).epsilon(1e-15));
  }
  SUBCASE("deterministic sensor and policy couple action to world") {
    const WorldJoint wj = compose_joint(params(1.5, 0.7, 0.3, 50, 50, 0));
    for (std::size_t i = 0; i < Pmf3::kCells; ++i) {
      if (Pmf3::value_at(i, Axis::Y) != Pmf3::value_at(i, Axis::Z)) CHECK(wj.joint.cell(i) <= 1e-12);
    }
  }
  SUBCASE("synergistic channel is a soft xor") {
    const WorldJoint wj = compose_joint(params(0, 0, 2, 0));
    const Pmf2 wa = marginal_pair(wj.joint, Axis::Y, Axis::Z);
    for (double v : wa.cells()) CHECK(v == Approx(0.25).epsilon(1e-12));
    for (int w : {-1, 1})
      for (int a : {-1, 1}) CHECK(wj.joint(w * a, w, a) / 0.25 == Approx(kSoftmax2).epsilon(1e-10));
  }
  SUBCASE("world marginal equals the prior") {
    const WorldJoint wj = compose_joint(params(0.4, 1.1, 0.9, 0.6, 2.0, 0.8));
    const Marginal w = marginalize(wj.joint, Axis::Y);
    CHECK(w.p[1] == Approx(wj.prior.prob(1)).epsilon(1e-14));
    CHECK(w.p[1] == Approx(1.0 / (1.0 + std::exp(-1.6))).epsilon(1e-14));
  }
  SUBCASE("zeta = 50 matches the exact copy sensor") {
    const ModelParams p = params(0.9, 2.2, 1.3, 0.7);
    const WorldJoint soft = compose_joint(p);
    const WorldJoint exact = compose_joint_exact_sensor(p);
    for (std::size_t i = 0; i < Pmf3::kCells; ++i) CHECK(std::abs(soft.joint.cell(i) - exact.joint.cell(i)) <= 1e-15);
  }
  SUBCASE("negative parameter") {
    CHECK_THROWS_AS(compose_joint(params(0, 0, 0, -1)), ArgumentError);
  }
}

TEST_CASE("conditional mutual information on model joints") {
  // alpha ignores w, so W' is conditionally independent of W given A.
  const WorldJoint wj = compose_joint(params(0, 2, 0, 0));
  CHECK(conditional_mutual_information(wj.joint, Axis::X, Axis::Y, Axis::Z) <= 1e-12);
  CHECK(weighted_kl_cmi(wj.joint, Axis::X, Axis::Y, Axis::Z) <= 1e-12);
}

TEST_CASE("mc_measures") {
  SUBCASE("world-only dynamics") {
    const McMeasures m = mc_measures(params(3, 0, 0, 0));
    const double expected = bsc_information(3.0);  // 0.9750248943
    CHECK(expected == Approx(0.9750248943).epsilon(1e-9));
    CHECK(std::abs(m.cmi_w - expected) <= 1e-10);
    CHECK(std::abs(m.ui_w - expected) <= 1e-4);
    CHECK(std::abs(m.mc_a_norm - 1.0) <= 1e-10);
    // CI is the gap between the two.
    const DecompositionResult d = decompose_oracle(compose_joint(params(3, 0, 0, 0)).joint, 1001);
    CHECK(d.ci <= 1e-4);
  }
  SUBCASE("action-only dynamics") {
    const McMeasures m = mc_measures(params(0, 3, 0, 0));
    CHECK(m.ui_w <= 1e-4);
    CHECK(m.cmi_w <= 1e-10);
    CHECK(std::abs(m.mc_a_norm - (1.0 - bsc_information(3.0))) <= 1e-10);  // 0.0249751057
  }
  SUBCASE("total independence") {
    const McMeasures m = mc_measures(params(0, 0, 0, 0));
    CHECK(m.ui_w == 0.0);
    CHECK(m.cmi_w <= 1e-12);
    CHECK(m.mc_a_norm == Approx(1.0));
  }
  SUBCASE("soft xor is complementary") {
    const ModelEvaluation ev = evaluate_model(params(0, 0, 2, 0));
    CHECK(std::abs(ev.decomposition.ci - bsc_information(2.0)) <= 1e-4);  // 0.8700207253
    CHECK(ev.decomposition.ui_y <= 1e-4);
    CHECK(ev.decomposition.ui_z <= 1e-4);
    CHECK(ev.decomposition.si <= 1e-4);
  }
}

TEST_CASE("property: model symmetries and identities") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 15; ++k) {
    const double phi = u(rng), psi = u(rng), omega = u(rng);

    // Exchanging (phi, W) with (psi, A) under a uniform policy.
    const ModelEvaluation a = evaluate_model(params(phi, psi, omega, 0));
    const ModelEvaluation b = evaluate_model(params(psi, phi, omega, 0));
    CHECK(std::abs(a.decomposition.ui_y - b.decomposition.ui_z) <= 5e-4);
    CHECK(std::abs(a.decomposition.ui_z - b.decomposition.ui_y) <= 5e-4);

    // I(W':W|A) = UI(W':W\A) + CI(W':W;A)
    CHECK(std::abs(a.measures.cmi_w - (a.measures.ui_w + a.decomposition.ci)) <= 5e-4);
    CHECK(a.measures.cmi_w >= a.measures.ui_w - 5e-4);

    // Equal unique weights: W and A are exchangeable.
    const ModelEvaluation e = evaluate_model(params(phi, phi, 0, 0));
    CHECK(std::abs(e.decomposition.ui_y - e.decomposition.ui_z) <= 5e-4);

    // Finite weights give strictly positive joints.
    const WorldJoint wj = compose_joint(params(phi, psi, omega, u(rng), u(rng), u(rng)));
    for (double v : wj.joint.cells()) CHECK(v > 0.0);

    // mc_a_norm is a normalized quantity.
    CHECK(a.measures.mc_a_norm >= 0.0);
    CHECK(a.measures.mc_a_norm <= 1.0);
  }
}

TEST_CASE("property: saturated policy removes unique and conditional information") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 10; ++k) {
    const ModelEvaluation ev = evaluate_model(params(u(rng), u(rng), u(rng), 50));
    CHECK(ev.measures.cmi_w <= 1e-6);
    CHECK(ev.measures.ui_w <= 1e-6);
    CHECK(ev.decomposition.ui_z <= 1e-6);
  }
}
