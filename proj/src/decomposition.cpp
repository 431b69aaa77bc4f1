#include "morphdecomp/decomposition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>

#include "morphdecomp/errors.hpp"

namespace morphdecomp {

namespace {

using Cells = Pmf3::Cells;

constexpr std::array<Functional, 4> kFunctionals{Functional::SharedInformation, Functional::UniqueY,
                                                 Functional::UniqueZ, Functional::Complementary};

// +1 where y == z, -1 where y != z.
constexpr double slope_sign(std::size_t idx) {
  return (((idx >> 1) & 1u) == (idx & 1u)) ? 1.0 : -1.0;
}

inline double nlogn(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

Cells perturbed_cells(const Cells& p, GammaPoint g) {
  Cells q;
  for (std::size_t i = 0; i < Pmf3::kCells; ++i) {
    const double gamma = (i >> 2) ? g.plus : g.minus;
    q[i] = p[i] + slope_sign(i) * gamma;
  }
  return q;
}

// Marginal entropies of a joint table laid out as in Pmf3.
struct Entropies {
  double xyz, xy, xz, yz, x, y, z;
};

Entropies entropies_of(const Cells& q) {
  std::array<double, 4> xy{}, xz{}, yz{};
  std::array<double, 2> x{}, y{}, z{};
  double hxyz = 0.0;
  for (std::size_t i = 0; i < Pmf3::kCells; ++i) {
    const std::size_t xb = i >> 2, yb = (i >> 1) & 1u, zb = i & 1u;
    hxyz += nlogn(q[i]);
    xy[2 * xb + yb] += q[i];
    xz[2 * xb + zb] += q[i];
    yz[2 * yb + zb] += q[i];
    x[xb] += q[i];
    y[yb] += q[i];
    z[zb] += q[i];
  }
  Entropies e{hxyz, 0, 0, 0, 0, 0, 0};
  for (std::size_t k = 0; k < 4; ++k) {
    e.xy += nlogn(xy[k]);
    e.xz += nlogn(xz[k]);
    e.yz += nlogn(yz[k]);
  }
  for (std::size_t k = 0; k < 2; ++k) {
    e.x += nlogn(x[k]);
    e.y += nlogn(y[k]);
    e.z += nlogn(z[k]);
  }
  return e;
}

// Objective oriented for minimization.
double objective(Functional f, const Entropies& e) {
  switch (f) {
    case Functional::UniqueY:  // I(X:Y|Z)
      return e.xz + e.yz - e.xyz - e.z;
    case Functional::UniqueZ:  // I(X:Z|Y)
      return e.xy + e.yz - e.xyz - e.y;
    case Functional::Complementary:  // I(X:(Y,Z))
      return e.x + e.yz - e.xyz;
    case Functional::SharedInformation: {  // -CoI = I(X:Y|Z) - I(X:Y)
      const double cmi = e.xz + e.yz - e.xyz - e.z;
      const double mi = e.x + e.y - e.xy;
      return cmi - mi;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

struct Incumbent {
  double value = std::numeric_limits<double>::infinity();
  GammaPoint at{};

  // Strictly better value, or equal value at a lexicographically smaller point.
  bool offer(double v, GammaPoint g) {
    if (v < value || (v == value && g < at)) {
      value = v;
      at = g;
      return true;
    }
    return false;
  }
};

// i-th of n grid points spanning [lo, hi], endpoints exact.
double axis_point(double lo, double hi, int i, int n) {
  if (n <= 1 || i <= 0) return lo;
  if (i >= n - 1) return hi;
  const double t = static_cast<double>(i) / static_cast<double>(n - 1);
  return std::clamp(lo + (hi - lo) * t, lo, hi);
}

struct AxisGrid {
  double lo;
  double hi;
  int n;
};

AxisGrid make_axis(double lo, double hi, int n) { return {lo, hi, hi > lo ? n : 1}; }

// Evaluates every functional in `fs` at each point of the product grid,
// offering the values to the matching incumbent.
void scan(const Cells& p, AxisGrid gm, AxisGrid gp, std::span<const Functional> fs,
          std::span<Incumbent> incumbents) {
  for (int i = 0; i < gm.n; ++i) {
    const double minus = axis_point(gm.lo, gm.hi, i, gm.n);
    for (int j = 0; j < gp.n; ++j) {
      const GammaPoint g{minus, axis_point(gp.lo, gp.hi, j, gp.n)};
      const Entropies e = entropies_of(perturbed_cells(p, g));
      for (std::size_t k = 0; k < fs.size(); ++k) incumbents[k].offer(objective(fs[k], e), g);
    }
  }
}

double spacing(const AxisGrid& a) { return a.n > 1 ? (a.hi - a.lo) / (a.n - 1) : 0.0; }

void refine(const Cells& p, const GammaRectangle& rect, Functional f, const OptimizationPlan& plan,
            double step_minus, double step_plus, Incumbent& best) {
  const std::array<Functional, 1> fs{f};
  for (int round = 0; round < plan.refine_rounds; ++round) {
    if (step_minus <= 0.0 && step_plus <= 0.0) return;
    const double before = best.value;
    const AxisGrid gm = make_axis(std::max(rect.lo_minus, best.at.minus - step_minus),
                                  std::min(rect.hi_minus, best.at.minus + step_minus), plan.refine_points);
    const AxisGrid gp = make_axis(std::max(rect.lo_plus, best.at.plus - step_plus),
                                  std::min(rect.hi_plus, best.at.plus + step_plus), plan.refine_points);
    scan(p, gm, gp, fs, std::span<Incumbent>(&best, 1));
    step_minus = spacing(gm);
    step_plus = spacing(gp);
    if (before - best.value < plan.tolerance && round > 0) return;
  }
}

double clamp_component(double v, const char* name) {
  if (v > 0.0) return v;
  if (v >= -kClampTolerance) return 0.0;  // also maps -0.0 to +0.0
  std::ostringstream os;
  os.precision(17);
  os << "decomposition produced negative " << name << " = " << v;
  throw DecompositionError(os.str());
}

DecompositionResult assemble(const Pmf3& P, const std::array<Incumbent, 4>& best) {
  DecompositionResult r;
  r.mi_total = mutual_information(P, Axis::X, {Axis::Y, Axis::Z});
  const double mi_y = mutual_information(P, Axis::X, Axis::Y);
  const double mi_z = mutual_information(P, Axis::X, Axis::Z);
  const double cmi_y = conditional_mutual_information(P, Axis::X, Axis::Y, Axis::Z);

  r.si = clamp_component(-best[0].value, "SI");
  r.ui_y = clamp_component(best[1].value, "UI_Y");
  r.ui_z = clamp_component(best[2].value, "UI_Z");
  r.ci = clamp_component(r.mi_total - best[3].value, "CI");
  r.argmin_si = best[0].at;
  r.argmin_ui_y = best[1].at;
  r.argmin_ui_z = best[2].at;
  r.argmin_ci = best[3].at;

  r.residual_sum = std::abs(r.mi_total - (r.si + r.ui_y + r.ui_z + r.ci));
  r.residual_pair_y = std::abs(mi_y - (r.si + r.ui_y));
  r.residual_pair_z = std::abs(mi_z - (r.si + r.ui_z));
  r.residual_cond = std::abs(cmi_y - (r.ui_y + r.ci));
  return r;
}

}  // namespace

void OptimizationPlan::validate() const {
  if (resolution < 2) throw ArgumentError("optimization plan: resolution must be >= 2");
  if (refine_rounds < 0) throw ArgumentError("optimization plan: refine_rounds must be >= 0");
  if (refine_points < 3 || refine_points % 2 == 0)
    throw ArgumentError("optimization plan: refine_points must be odd and >= 3");
  if (!(tolerance >= 0.0)) throw ArgumentError("optimization plan: tolerance must be >= 0");
}

double DecompositionResult::max_residual() const {
  return std::max({residual_sum, residual_pair_y, residual_pair_z, residual_cond});
}

GammaRectangle gamma_bounds(const Pmf3& P) {
  GammaRectangle r;
  r.lo_minus = std::max(-P(-1, -1, -1), -P(-1, +1, +1));
  r.hi_minus = std::min(P(-1, -1, +1), P(-1, +1, -1));
  r.lo_plus = std::max(-P(+1, -1, -1), -P(+1, +1, +1));
  r.hi_plus = std::min(P(+1, -1, +1), P(+1, +1, -1));
  return r;
}

Pmf3 perturb(const Pmf3& P, double gamma_minus, double gamma_plus) {
  const GammaPoint g{gamma_minus, gamma_plus};
  if (!gamma_bounds(P).contains(g)) {
    std::ostringstream os;
    os.precision(17);
    os << "perturb: gamma (" << gamma_minus << ", " << gamma_plus << ") outside the feasible rectangle";
    throw FeasibilityError(os.str());
  }
  return Pmf3(perturbed_cells(P.cells(), g));
}

double functional_value(const Pmf3& P, Functional f, GammaPoint g) {
  return objective(f, entropies_of(perturb(P, g).cells()));
}

DecompositionResult decompose(const Pmf3& P, const OptimizationPlan& plan) {
  plan.validate();
  const GammaRectangle rect = gamma_bounds(P);
  const AxisGrid gm = make_axis(rect.lo_minus, rect.hi_minus, plan.resolution);
  const AxisGrid gp = make_axis(rect.lo_plus, rect.hi_plus, plan.resolution);

  std::array<Incumbent, 4> best;
  scan(P.cells(), gm, gp, kFunctionals, best);
  // P itself lies in the rectangle.
  const Entropies at_origin = entropies_of(P.cells());
  for (std::size_t k = 0; k < kFunctionals.size(); ++k)
    best[k].offer(objective(kFunctionals[k], at_origin), GammaPoint{});

  for (std::size_t k = 0; k < kFunctionals.size(); ++k)
    refine(P.cells(), rect, kFunctionals[k], plan, spacing(gm), spacing(gp), best[k]);
  return assemble(P, best);
}

DecompositionResult decompose_oracle(const Pmf3& P, int resolution) {
  if (resolution < 101) throw ArgumentError("decompose_oracle: resolution must be >= 101");
  const GammaRectangle rect = gamma_bounds(P);
  std::array<Incumbent, 4> best;
  scan(P.cells(), make_axis(rect.lo_minus, rect.hi_minus, resolution),
       make_axis(rect.lo_plus, rect.hi_plus, resolution), kFunctionals, best);
  return assemble(P, best);
}

}  // namespace morphdecomp
