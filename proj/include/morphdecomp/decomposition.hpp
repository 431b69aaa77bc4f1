#pragma once

// Bivariate information decomposition of I(X : (Y,Z)) into shared (SI),
// unique (UI_Y, UI_Z) and complementary (CI) information for binary triples.
//
// The set of joint distributions sharing the (X,Y) and (X,Z) marginals of P
// is a rectangle in two parameters (gamma_-1, gamma_+1):
//
//   Q(x,y,z) = P(x,y,z) + gamma_x   if y == z
//   Q(x,y,z) = P(x,y,z) - gamma_x   if y != z
//
// and every component is the optimum of an information functional of Q over
// that rectangle:
//
//   UI_Y = min I_Q(X:Y|Z)      SI = max CoI_Q(X;Y;Z)
//   UI_Z = min I_Q(X:Z|Y)      CI = I_P(X:(Y,Z)) - min I_Q(X:(Y,Z))

#include <compare>

#include "morphdecomp/probcore.hpp"

namespace morphdecomp {

// Components within this distance below zero are clamped to 0; anything more
// negative is reported as a DecompositionError.
inline constexpr double kClampTolerance = 1e-6;
// Default bound on the identity residuals (sum, pairs, conditional).
inline constexpr double kConsistencyTolerance = 5e-4;

struct GammaPoint {
  double minus = 0.0;  // perturbation of the x = -1 slice
  double plus = 0.0;   // perturbation of the x = +1 slice

  auto operator<=>(const GammaPoint&) const = default;
};

struct GammaRectangle {
  double lo_minus = 0.0;
  double hi_minus = 0.0;
  double lo_plus = 0.0;
  double hi_plus = 0.0;

  bool contains(GammaPoint g) const {
    return g.minus >= lo_minus && g.minus <= hi_minus && g.plus >= lo_plus && g.plus <= hi_plus;
  }
  bool operator==(const GammaRectangle&) const = default;
};

struct OptimizationPlan {
  int resolution = 201;     // coarse grid points per gamma axis
  int refine_rounds = 4;    // local refinement rounds after the coarse grid
  int refine_points = 21;   // points per axis in a refinement window (10x shrink)
  double tolerance = 1e-6;  // stop refining once a round improves by less (bits)

  // Throws ArgumentError when a field is out of range.
  void validate() const;
};

enum class Functional { SharedInformation, UniqueY, UniqueZ, Complementary };

struct DecompositionResult {
  double si = 0.0;
  double ui_y = 0.0;
  double ui_z = 0.0;
  double ci = 0.0;
  double mi_total = 0.0;  // I(X:(Y,Z)) under P

  // Optimizer location for each functional.
  GammaPoint argmin_si;
  GammaPoint argmin_ui_y;
  GammaPoint argmin_ui_z;
  GammaPoint argmin_ci;

  // Absolute defects of the identities every decomposition satisfies:
  //   sum:    I(X:(Y,Z)) = SI + UI_Y + UI_Z + CI
  //   pair_y: I(X:Y)     = SI + UI_Y
  //   pair_z: I(X:Z)     = SI + UI_Z
  //   cond:   I(X:Y|Z)   = UI_Y + CI
  double residual_sum = 0.0;
  double residual_pair_y = 0.0;
  double residual_pair_z = 0.0;
  double residual_cond = 0.0;

  double max_residual() const;
};

GammaRectangle gamma_bounds(const Pmf3& P);

// Q_gamma as above. Throws FeasibilityError when gamma lies outside
// gamma_bounds(P).
Pmf3 perturb(const Pmf3& P, double gamma_minus, double gamma_plus);
inline Pmf3 perturb(const Pmf3& P, GammaPoint g) { return perturb(P, g.minus, g.plus); }

// Value of `f` at Q = perturb(P, g), oriented for minimization: the
// conditional mutual informations for UniqueY/UniqueZ, I_Q(X:(Y,Z)) for
// Complementary, and -CoI_Q for SharedInformation.
double functional_value(const Pmf3& P, Functional f, GammaPoint g);

// Coarse grid over the rectangle followed by local grid refinement, run
// independently for each of the four functionals. Deterministic; grid ties
// go to the lexicographically smallest (gamma_-1, gamma_+1).
DecompositionResult decompose(const Pmf3& P, const OptimizationPlan& plan = {});

// Plain resolution x resolution grid without refinement. Requires
// resolution >= 101.
DecompositionResult decompose_oracle(const Pmf3& P, int resolution);

}  // namespace morphdecomp
