#include "chemflood/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace chemflood {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

int dead_band_sign(double r) {
  if (r > 1e-12) return 1;
  if (r < -1e-12) return -1;
  return 0;
}

}  // namespace

double G_entropy_flux(double U, double k, double zeta, const ModelConfig& m) {
  if (U == k) return 0.0;
  const double FU = eval_F(U, zeta, m).F;
  const double Fk = eval_F(k, zeta, m).F;
  return (FU - Fk) * sgn(U - k);
}

double A_entropy_flux(double zeta, double k, const ModelConfig& m) {
  if (zeta == k) return 0.0;
  const double az = eval_adsorption(zeta, m).a;
  const double ak = eval_adsorption(k, m).a;
  return (az - ak) * sgn(zeta - k);
}

EntropyResidual u_shock_entropy_max(const LagrangeShockData& lsh, const ModelConfig& m) {
  if (std::fabs(lsh.plus.zeta - lsh.minus.zeta) > 1e-12) {
    throw WrongShockKindError("u_shock_entropy_max: zeta jumps across the shock");
  }
  if (lsh.minus.dry || lsh.plus.dry) {
    throw InputError("u_shock_entropy_max: both sides must be wet");
  }
  const double zeta = lsh.plus.zeta;
  const double Um = lsh.minus.U, Up = lsh.plus.U;
  auto residual = [&](double k) {
    const double jump_G = G_entropy_flux(Up, k, zeta, m) - G_entropy_flux(Um, k, zeta, m);
    const double jump_E = std::fabs(Up - k) - std::fabs(Um - k);
    return jump_G - lsh.v_star * jump_E;
  };

  const double lo = std::min(Um, Up);
  const double hi = std::max(Um, Up);
  EntropyResidual best{lo, residual(lo), 0};
  auto consider = [&](double k) {
    const double r = residual(k);
    if (r > best.residual) best = {k, r, 0};
  };
  consider(hi);
  const int n = 1025;
  for (int i = 1; i < n; ++i) {
    consider(lo + (hi - lo) * static_cast<double>(i) / n);
  }
  // Stationary points of the chord defect: F_U(k) = v*. The residual is
  // smooth between the endpoints, so these are its only interior extrema.
  auto slope_defect = [&](double k) { return eval_F(k, zeta, m).F_U - lsh.v_star; };
  for (const Bracket& br : scan_sign_changes(slope_defect, lo + 1e-12, hi - 1e-12, 64)) {
    consider(br.lo == br.hi ? br.lo : bisect(slope_defect, br.lo, br.hi, 1e-13));
  }
  best.verdict_sign = dead_band_sign(best.residual);
  return best;
}

EntropyResidual zeta_shock_entropy_max(double zeta_minus, double zeta_plus,
                                       const ModelConfig& m) {
  if (zeta_minus == zeta_plus) {
    throw WrongShockKindError("zeta_shock_entropy_max: no zeta jump");
  }
  const double am = eval_adsorption(zeta_minus, m).a;
  const double ap = eval_adsorption(zeta_plus, m).a;
  const double v = (ap - am) / (zeta_plus - zeta_minus);
  auto residual = [&](double k) {
    const double jump_A = A_entropy_flux(zeta_plus, k, m) - A_entropy_flux(zeta_minus, k, m);
    const double jump_E = std::fabs(zeta_plus - k) - std::fabs(zeta_minus - k);
    return jump_A - v * jump_E;
  };
  const double lo = std::min(zeta_minus, zeta_plus);
  const double hi = std::max(zeta_minus, zeta_plus);
  EntropyResidual best{lo, residual(lo), 0};
  const int n = 1025;
  for (int i = 1; i <= n; ++i) {
    const double k = lo + (hi - lo) * static_cast<double>(i) / n;
    const double r = residual(k);
    if (r > best.residual) best = {k, r, 0};
  }
  best.verdict_sign = dead_band_sign(best.residual);
  return best;
}

GViolation zeta_shock_G_violation(const LagrangeShockData& lsh, const ModelConfig& m) {
  if (std::fabs(lsh.plus.zeta - lsh.minus.zeta) <= 1e-12) {
    throw WrongShockKindError("zeta_shock_G_violation: no zeta jump");
  }
  if (lsh.minus.dry || lsh.plus.dry) {
    throw InputError("zeta_shock_G_violation: both sides must be wet");
  }
  GViolation out;
  out.k = 1.0 + 0.5 * (std::min(lsh.minus.U, lsh.plus.U) - 1.0);
  out.value = eval_F(out.k, lsh.minus.zeta, m).F - eval_F(out.k, lsh.plus.zeta, m).F;
  if (m.flux.kc > 0.0 && !(out.value > 0.0)) {
    throw StructuralError("zeta_shock_G_violation: expected positive gap; check the sign of F_zeta");
  }
  return out;
}

double zeta_shock_pair_residual(std::pair<double, double> U_pair,
                                std::pair<double, double> V_pair,
                                std::pair<double, double> zeta_pair, const ModelConfig& m) {
  const auto [Um, Up] = U_pair;
  const auto [Vm, Vp] = V_pair;
  const auto [zm, zp] = zeta_pair;
  if (zm == zp) throw WrongShockKindError("zeta_shock_pair_residual: no zeta jump");
  const double v = (eval_adsorption(zp, m).a - eval_adsorption(zm, m).a) / (zp - zm);

  // Both traces must jump consistently across the same zeta-shock.
  auto rh_gap = [&](double a_minus, double a_plus) {
    return (eval_F(a_plus, zp, m).F - eval_F(a_minus, zm, m).F) - v * (a_plus - a_minus);
  };
  if (std::fabs(rh_gap(Um, Up)) > 1e-9 || std::fabs(rh_gap(Vm, Vp)) > 1e-9) {
    throw InputError("zeta_shock_pair_residual: a trace violates the jump relations");
  }
  // The crossing pattern excluded by the connection rule cannot occur in a
  // solution; reject it rather than score it.
  auto forbidden = [&](double a_minus, double a_plus) {
    const double fu_m = eval_F(a_minus, zm, m).F_U;
    const double fu_p = eval_F(a_plus, zp, m).F_U;
    return fu_m < v - 1e-12 && fu_p > v + 1e-12;
  };
  if (forbidden(Um, Up) || forbidden(Vm, Vp)) {
    throw InputError("zeta_shock_pair_residual: pairing uses the excluded crossing");
  }

  const double jump_G = (eval_F(Up, zp, m).F - eval_F(Vp, zp, m).F) * sgn(Up - Vp) -
                        (eval_F(Um, zm, m).F - eval_F(Vm, zm, m).F) * sgn(Um - Vm);
  const double jump_E = std::fabs(Up - Vp) - std::fabs(Um - Vm);
  return jump_G - v * jump_E;
}

}  // namespace chemflood
