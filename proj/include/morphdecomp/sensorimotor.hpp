#pragma once

// One step of a reactive binary sensorimotor loop
//
//   W --beta--> S --pi--> A,   (W, A) --alpha--> W'
//
// with softmax-form kernels over {-1,+1}:
//
//   alpha(w'|w,a) ~ exp(phi w'w + psi w'a + omega w'wa)
//   beta(s|w)     ~ exp(zeta s w)
//   pi(a|s)       ~ exp(mu a s)
//   p(w)          ~ exp(tau w)
//
// and the morphological-computation measures derived from the joint
// p(w', w, a), which is stored as a Pmf3 with X = W', Y = W, Z = A.

#include <array>
#include <cstddef>
#include <vector>

#include "morphdecomp/decomposition.hpp"
#include "morphdecomp/probcore.hpp"

namespace morphdecomp {

// Sensor gain used for "the sensor copies the world state". At 50 the
// off-diagonal mass is ~4e-44.
inline constexpr double kDeterministicZeta = 50.0;

struct ModelParams {
  double phi = 0.0;    // unique influence of W on W'
  double psi = 0.0;    // unique influence of A on W'
  double omega = 0.0;  // synergistic influence of (W, A) on W'
  double zeta = kDeterministicZeta;
  double mu = 0.0;
  double tau = 0.0;

  // Throws ArgumentError unless all six are finite and >= 0.
  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

// Conditional distribution of a binary variable given 0, 1 or 2 binary
// conditioning variables. Rows are indexed by the conditioning values in
// binary order, the first conditioning variable most significant.
class BinaryKernel {
 public:
  using Row = std::array<double, 2>;  // {p(-1), p(+1)}

  // Throws NormalizationError for a row off by more than 1e-12 or with a
  // negative entry, ArgumentError when rows.size() != 2^arity.
  BinaryKernel(std::size_t arity, std::vector<Row> rows);

  std::size_t arity() const noexcept { return arity_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }

  double prob(int out) const;
  double prob(int out, int given) const;
  double prob(int out, int given1, int given2) const;

 private:
  std::size_t arity_;
  std::vector<Row> rows_;
};

// alpha(w'|w,a); conditioning order (w, a).
BinaryKernel world_dynamics(double phi, double psi, double omega);
// beta(s|w)
BinaryKernel sensor_kernel(double zeta);
// pi(a|s)
BinaryKernel policy_kernel(double mu);
// p(w), arity 0.
BinaryKernel world_prior(double tau);

struct WorldJoint {
  Pmf3 joint;  // (W', W, A)
  BinaryKernel alpha;
  BinaryKernel beta;
  BinaryKernel pi;
  BinaryKernel prior;
};

// joint(w',w,a) = sum_s p(w) beta(s|w) pi(a|s) alpha(w'|w,a).
WorldJoint compose_joint(const ModelParams& params);

// Same composition with beta replaced by the exact copy s = w (zeta ignored).
WorldJoint compose_joint_exact_sensor(const ModelParams& params);

struct McMeasures {
  double mc_a_norm = 0.0;  // 1 - I(W':A|W) / log2|W|
  double cmi_w = 0.0;      // I(W':W|A)
  double ui_w = 0.0;       // UI(W':W \ A)
};

// Measures on a given (W', W, A) joint and its decomposition.
McMeasures measures_from(const Pmf3& joint, const DecompositionResult& decomposition);

struct ModelEvaluation {
  WorldJoint world;
  DecompositionResult decomposition;
  McMeasures measures;
};

ModelEvaluation evaluate_model(const ModelParams& params, const OptimizationPlan& plan = {});

McMeasures mc_measures(const ModelParams& params, const OptimizationPlan& plan = {});

}  // namespace morphdecomp
