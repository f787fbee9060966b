#ifndef CHEMFLOOD_SHOCK_HPP
#define CHEMFLOOD_SHOCK_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chemflood/lagrange.hpp"
#include "chemflood/model.hpp"

namespace chemflood {

/// Jump in original coordinates: left/behind state (s-,c-), right/ahead state
/// (s+,c+), velocity v. Rankine-Hugoniot ties them: v[s]=[f], v[cs+a]=[cf]
/// with [q] = q(+) - q(-).
struct ShockData {
  double s_minus = 0.0;
  double s_plus = 0.0;
  double c_minus = 0.0;
  double c_plus = 0.0;
  double v = 0.0;
};

/// Jump in Lagrange coordinates, sides ordered by the potential coordinate.
/// v_star [U] = [F], v_star [zeta] = [a(zeta)].
struct LagrangeShockData {
  LagrangeState minus;  // phi - 0 side
  LagrangeState plus;   // phi + 0 side
  double v_star = 0.0;
};

/// Chord coefficients of the adsorption isotherm between two concentrations:
/// d1 = [a]/[c], d2 = (c+ a(c-) - c- a(c+)) / (c- - c+).
/// Throws InputError when c- == c+ (treat as an s-shock instead).
std::pair<double, double> d_coeffs(double c_minus, double c_plus, const ModelConfig& m);

/// v = [f]/[s] at fixed c. Throws InputError on equal saturations.
double solve_s_shock_velocity(double s_minus, double s_plus, double c, const ModelConfig& m);

/// Residuals of the two Rankine-Hugoniot relations in original coordinates.
std::pair<double, double> rh_residuals(const ShockData& sh, const ModelConfig& m);

/// Residuals of the two Rankine-Hugoniot relations in Lagrange coordinates.
/// A DRY side contributes via the conventions F -> -infty slope 0: only wet
/// components are checked (U-residual is skipped when a side is DRY).
std::pair<double, double> rh_residuals_lagrange(const LagrangeShockData& lsh, const ModelConfig& m);

struct RestrictionsVerdict {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Necessary conditions every admissible shock satisfies: 0 < v < ||f||_C1,
/// s- != 0, s+ != s-, c+ <= c-, and s+ = 0 forces c+ = c-.
/// Pass a precomputed f_c1_norm(m) to avoid the grid sweep per call.
RestrictionsVerdict restrictions_check(const ShockData& sh, const ModelConfig& m,
                                       double c1_norm = -1.0);

/// Chord condition for an s-shock: Psi(s)(s+ - s-) >= 0 between the states,
/// Psi(s) = f(s,c) - f(s-,c) - v(s - s-). 513 transversal samples plus local
/// refinement near any |Psi| < 1e-10.
bool oleinik_s_shock(double s_minus, double s_plus, double c, const ModelConfig& m);

struct LaxVerdict {
  bool holds = false;
  bool boundary_case = false;  // both inequalities tight (DRY minus side only)
  double lo_residual = 0.0;    // v* - F_U(U+, zeta)  (>= 0 when Lax holds)
  double hi_residual = 0.0;    // F_U(U-, zeta) - v*  (>= 0 when Lax holds)
};

/// Characteristic-speed inequalities for a U-shock (equal zeta on both sides):
/// F_U(U+, zeta) <= v* <= F_U(U-, zeta), both tight only for a DRY minus side.
/// Throws WrongShockKindError on a zeta jump.
LaxVerdict lax_lagrange(const LagrangeShockData& lsh, const ModelConfig& m);

struct SStarResult {
  double s_star_c;  // intersection construction on the worst c-slice
  double s_star_s;  // lower-hull tangency, minimized over c samples
  double s_star;    // min of the two
};

/// Threshold saturation below which every admissible shock satisfies
/// f_s(s-,c-) > v. Combines the chord-line intersection bound (line
/// (s+h)/(1+h) against f(.,0), h = full-range adsorption chord) with the
/// smallest lower-convex-hull tangency over 33 c-slices.
SStarResult s_star(const ModelConfig& m);

enum class NullclineClass {
  Type0,     // one transversal root on each boundary
  Type0I,    // border case: second root exactly at s = 1 (both sides)
  TypeI,     // two transversal roots on each boundary
  TypeI_II,  // border case: double root (tangency) on one boundary
  TypeII,    // roots on one boundary only
  Empty,     // no roots on either boundary (no critical points)
};

struct NullclineType {
  NullclineClass cls = NullclineClass::Empty;
  std::vector<double> roots_minus;  // roots of f(s,c-) - v(s+d1) = 0, ascending
  std::vector<double> roots_plus;   // roots of f(s,c+) - v(s+d1) = 0, ascending
  bool tangent_minus = false;
  bool tangent_plus = false;
  bool border_root = false;  // root at s = 1 within tolerance
};

/// Root pattern of f(s,c) - v(s+d1) on the two concentration boundaries.
/// Roots are bisected to 1e-12; a tangency is declared when the interior
/// maximum of the defect is below 1e-12 in absolute value after refinement
/// to a bracket narrower than 1e-9.
NullclineType classify_nullclines(double c_minus, double c_plus, double v, const ModelConfig& m);

struct Admissibility {
  bool admissible = false;
  std::string reason;
};

/// Full admissibility pipeline: restrictions, then the chord condition for
/// s-shocks, or the nullcline-connection rule for c-shocks (the upper-to-lower
/// crossing pattern in Type I / Type 0-I configurations is the one excluded
/// connection). Throws InputError on Rankine-Hugoniot-inconsistent input.
Admissibility admissible(const ShockData& sh, const ModelConfig& m, double c1_norm = -1.0);

/// Shock map to Lagrange coordinates: U+ = 1/f(s-,c-), U- = 1/f(s+,c+),
/// zeta+ = c-, zeta- = c+; v* from the Lagrange Rankine-Hugoniot relations
/// (exactly d1 for a c-shock, 0 for a DRY minus side).
/// s+ = 0 requires c+ = c- and maps to a DRY minus side; s- = 0 is unmappable.
LagrangeShockData map_shock(const ShockData& sh, const ModelConfig& m);

/// Inverse of map_shock. The minus side may be DRY (maps back to s+ = 0).
ShockData unmap_shock(const LagrangeShockData& lsh, const ModelConfig& m);

}  // namespace chemflood

#endif  // CHEMFLOOD_SHOCK_HPP
