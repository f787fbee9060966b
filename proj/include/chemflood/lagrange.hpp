#ifndef CHEMFLOOD_LAGRANGE_HPP
#define CHEMFLOOD_LAGRANGE_HPP

#include "chemflood/model.hpp"

namespace chemflood {

/// State in Lagrange (potential) coordinates. U = 1/f(s,c), zeta = c.
/// Zero flow (s = 0) has no finite image; it is carried as a tagged DRY state
/// so downstream code must branch explicitly instead of overflowing.
struct LagrangeState {
  double U = 1.0;
  double zeta = 0.0;
  bool dry = false;

  static LagrangeState wet(double U, double zeta) { return {U, zeta, false}; }
  static LagrangeState dry_state(double zeta) { return {0.0, zeta, true}; }
};

struct SC {
  double s = 0.0;
  double c = 0.0;
};

/// (s,c) -> (U,zeta). s = 0 maps to DRY.
LagrangeState to_lagrange(double s, double c, const ModelConfig& m);

/// Inverse saturation: the unique s in (0,1] with 1/f(s,zeta) = U.
/// Monotone bisection (f_s > 0) to 1e-13, Newton-polished.
double saturation_from_U(double U, double zeta, const ModelConfig& m);

/// (U,zeta) -> (s,c). Throws InputError on U < 1 or a DRY input.
SC from_lagrange(const LagrangeState& st, const ModelConfig& m);

struct FEval {
  double F;
  double F_U;
  double F_UU;
};

/// Transformed flux F(U,zeta) = -s/f and its U-derivatives,
/// F_U = f/f_s - s and F_UU = f_ss f^3 / f_s^3, all at s = s(U,zeta).
/// At U = 1 the derivatives blow up: returns +inf / -inf there.
FEval eval_F(double U, double zeta, const ModelConfig& m);

/// zeta-derivative of F at fixed U: F_zeta = U f_c / f_s.
double F_zeta(double U, double zeta, const ModelConfig& m);

/// Argmax of F(.,zeta): U^max = 1/f(s^wf(zeta),zeta). F_U flips + -> - there.
double U_max(double zeta, const ModelConfig& m);

/// Inflection of F(.,zeta): U^I = 1/f(s^I(zeta),zeta). F_UU flips - -> + there.
double U_inflection(double zeta, const ModelConfig& m);

/// Convenience bundle for a fixed zeta-slice of the transformed flux.
struct FluxCurveL {
  const ModelConfig* model;
  double zeta;
  double u_max;
  double u_inflection;

  FEval eval(double U) const { return eval_F(U, zeta, *model); }
};

FluxCurveL make_flux_curve(double zeta, const ModelConfig& m);

/// Grid checks of the structural properties of F: negativity, F(1,zeta) = -1,
/// divergence to -inf along a geometric U-ladder, the F_U / F_UU sign ladders
/// around U^max and U^I, decay of F_U at large U, and F_zeta < 0 when kc > 0.
ValidationReport validate_F(const ModelConfig& m, int n = 64);

}  // namespace chemflood

#endif  // CHEMFLOOD_LAGRANGE_HPP
