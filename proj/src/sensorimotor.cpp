#include "morphdecomp/sensorimotor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "morphdecomp/errors.hpp"

namespace morphdecomp {

namespace {

// Two-point softmax over v in {-1,+1} of v * energy.
BinaryKernel::Row softmax_row(double energy) {
  return {1.0 / (1.0 + std::exp(2.0 * energy)), 1.0 / (1.0 + std::exp(-2.0 * energy))};
}

void require_weight(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << "model parameter " << name << " must be finite and >= 0 (got " << v << ")";
    throw ArgumentError(os.str());
  }
}

// Composes the joint given a sensor law s ~ sensor(s | w).
template <typename Sensor>
Pmf3 compose(const BinaryKernel& prior, Sensor&& sensor, const BinaryKernel& pi, const BinaryKernel& alpha) {
  Pmf3::Cells cells{};
  for (int w : {-1, +1}) {
    for (int a : {-1, +1}) {
      double p_wa = 0.0;
      for (int s : {-1, +1}) p_wa += prior.prob(w) * sensor(s, w) * pi.prob(a, s);
      for (int wn : {-1, +1}) {
        cells[Pmf3::index(binary_index(wn), binary_index(w), binary_index(a))] = p_wa * alpha.prob(wn, w, a);
      }
    }
  }
  return Pmf3(cells);
}

}  // namespace

void ModelParams::validate() const {
  require_weight(phi, "phi");
  require_weight(psi, "psi");
  require_weight(omega, "omega");
  require_weight(zeta, "zeta");
  require_weight(mu, "mu");
  require_weight(tau, "tau");
}

BinaryKernel::BinaryKernel(std::size_t arity, std::vector<Row> rows) : arity_(arity), rows_(std::move(rows)) {
  if (arity_ > 2 || rows_.size() != (std::size_t{1} << arity_)) {
    throw ArgumentError("BinaryKernel: expected 2^arity rows");
  }
  for (const Row& r : rows_) {
    if (!(r[0] >= 0.0) || !(r[1] >= 0.0) || std::abs(r[0] + r[1] - 1.0) > kNormTolerance) {
      throw NormalizationError("BinaryKernel: row is not a distribution");
    }
  }
}

double BinaryKernel::prob(int out) const {
  if (arity_ != 0) throw ArgumentError("BinaryKernel: expected " + std::to_string(arity_) + " conditioning values");
  return rows_[0][binary_index(out)];
}

double BinaryKernel::prob(int out, int given) const {
  if (arity_ != 1) throw ArgumentError("BinaryKernel: expected " + std::to_string(arity_) + " conditioning values");
  return rows_[binary_index(given)][binary_index(out)];
}

double BinaryKernel::prob(int out, int given1, int given2) const {
  if (arity_ != 2) throw ArgumentError("BinaryKernel: expected " + std::to_string(arity_) + " conditioning values");
  return rows_[2 * binary_index(given1) + binary_index(given2)][binary_index(out)];
}

BinaryKernel world_dynamics(double phi, double psi, double omega) {
  require_weight(phi, "phi");
  require_weight(psi, "psi");
  require_weight(omega, "omega");
  std::vector<BinaryKernel::Row> rows;
  for (int w : {-1, +1})
    for (int a : {-1, +1}) rows.push_back(softmax_row(phi * w + psi * a + omega * w * a));
  return BinaryKernel(2, std::move(rows));
}

BinaryKernel sensor_kernel(double zeta) {
  require_weight(zeta, "zeta");
  return BinaryKernel(1, {softmax_row(-zeta), softmax_row(zeta)});
}

BinaryKernel policy_kernel(double mu) {
  require_weight(mu, "mu");
  return BinaryKernel(1, {softmax_row(-mu), softmax_row(mu)});
}

BinaryKernel world_prior(double tau) {
  require_weight(tau, "tau");
  return BinaryKernel(0, {softmax_row(tau)});
}

WorldJoint compose_joint(const ModelParams& params) {
  params.validate();
  BinaryKernel alpha = world_dynamics(params.phi, params.psi, params.omega);
  BinaryKernel beta = sensor_kernel(params.zeta);
  BinaryKernel pi = policy_kernel(params.mu);
  BinaryKernel prior = world_prior(params.tau);
  Pmf3 joint = compose(prior, [&](int s, int w) { return beta.prob(s, w); }, pi, alpha);
  return {std::move(joint), std::move(alpha), std::move(beta), std::move(pi), std::move(prior)};
}

WorldJoint compose_joint_exact_sensor(const ModelParams& params) {
  params.validate();
  BinaryKernel alpha = world_dynamics(params.phi, params.psi, params.omega);
  BinaryKernel beta(1, {BinaryKernel::Row{1.0, 0.0}, BinaryKernel::Row{0.0, 1.0}});
  BinaryKernel pi = policy_kernel(params.mu);
  BinaryKernel prior = world_prior(params.tau);
  Pmf3 joint = compose(prior, [](int s, int w) { return s == w ? 1.0 : 0.0; }, pi, alpha);
  return {std::move(joint), std::move(alpha), std::move(beta), std::move(pi), std::move(prior)};
}

McMeasures measures_from(const Pmf3& joint, const DecompositionResult& decomposition) {
  constexpr double kLog2WorldStates = 1.0;  // log2 |{-1,+1}|
  McMeasures m;
  const double cmi_a = conditional_mutual_information(joint, Axis::X, Axis::Z, Axis::Y);
  m.mc_a_norm = std::clamp(1.0 - cmi_a / kLog2WorldStates, 0.0, 1.0);
  m.cmi_w = conditional_mutual_information(joint, Axis::X, Axis::Y, Axis::Z);
  m.ui_w = decomposition.ui_y;
  return m;
}

ModelEvaluation evaluate_model(const ModelParams& params, const OptimizationPlan& plan) {
  WorldJoint world = compose_joint(params);
  DecompositionResult d = decompose(world.joint, plan);
  McMeasures m = measures_from(world.joint, d);
  return {std::move(world), d, m};
}

McMeasures mc_measures(const ModelParams& params, const OptimizationPlan& plan) {
  return evaluate_model(params, plan).measures;
}

}  // namespace morphdecomp
