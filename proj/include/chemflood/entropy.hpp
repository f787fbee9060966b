#ifndef CHEMFLOOD_ENTROPY_HPP
#define CHEMFLOOD_ENTROPY_HPP

#include <utility>

#include "chemflood/shock.hpp"

namespace chemflood {

/// Entropy flux paired with |U - k|:  G(U,k) = (F(U,zeta) - F(k,zeta)) sign(U-k).
double G_entropy_flux(double U, double k, double zeta, const ModelConfig& m);

/// Entropy flux paired with |zeta - k|:  A(zeta,k) = (a(zeta) - a(k)) sign(zeta-k).
double A_entropy_flux(double zeta, double k, const ModelConfig& m);

struct EntropyResidual {
  double k = 0.0;        // argmax of the residual
  double residual = 0.0; // [flux jump] - speed * [entropy jump] at that k
  int verdict_sign = 0;  // sign with a 1e-12 dead band
};

/// Worst-case Kruzhkov residual [G(U,k)] - v* [|U-k|] over k for a U-shock.
/// Outside the U-interval the residual vanishes identically, so the search
/// covers 1025 interior samples, the endpoints, and the stationary points of
/// the chord defect. Nonpositive for admissible shocks.
/// Throws WrongShockKindError on a zeta jump, InputError on a DRY side.
EntropyResidual u_shock_entropy_max(const LagrangeShockData& lsh, const ModelConfig& m);

/// Worst-case residual [A(zeta,k)] - v [|zeta-k|] over k for a zeta-shock with
/// v = [a]/[zeta]. Nonpositive when zeta- < zeta+ (concave isotherm).
EntropyResidual zeta_shock_entropy_max(double zeta_minus, double zeta_plus, const ModelConfig& m);

struct GViolation {
  double k = 0.0;
  double value = 0.0;  // F(k,zeta-) - F(k,zeta+); positive when the flux thickens
};

/// Witness that the scalar Kruzhkov inequality fails on zeta-shocks: for
/// k below both U values the residual equals F(k,zeta-) - F(k,zeta+) > 0
/// whenever the flux strictly decreases in zeta. Returns the default witness
/// k = 1 + (min(U)-1)/2. Throws if no violation exists despite kc > 0.
GViolation zeta_shock_G_violation(const LagrangeShockData& lsh, const ModelConfig& m);

/// Residual [G(U,V)] - v [|U-V|] for two solution traces (U-pair, V-pair)
/// across one zeta-shock; both pairs must satisfy the Lagrange
/// Rankine-Hugoniot relations for the same zeta jump. Nonpositive for every
/// realizable pairing; the excluded crossing pattern is rejected.
double zeta_shock_pair_residual(std::pair<double, double> U_pair,
                                std::pair<double, double> V_pair,
                                std::pair<double, double> zeta_pair, const ModelConfig& m);

}  // namespace chemflood

#endif  // CHEMFLOOD_ENTROPY_HPP
