#include "chemflood/shock.hpp"

#include <algorithm>
#include <cmath>

namespace chemflood {

namespace {

constexpr double kZetaEqTol = 1e-12;    // |dc| below this is an s-shock
constexpr double kTangencyTol = 1e-12;  // defect at a refined double root
constexpr double kBorderTol = 1e-9;     // root at s = 1 within this

double adsorption_chord(double ca, double cb, const ModelConfig& m) {
  return (eval_adsorption(ca, m).a - eval_adsorption(cb, m).a) / (ca - cb);
}

}  // namespace

std::pair<double, double> d_coeffs(double c_minus, double c_plus, const ModelConfig& m) {
  if (c_minus == c_plus) {
    throw InputError("d_coeffs: c- == c+ has no chord (s-shock; coefficients are not unique)");
  }
  const double am = eval_adsorption(c_minus, m).a;
  const double ap = eval_adsorption(c_plus, m).a;
  const double d1 = (am - ap) / (c_minus - c_plus);
  const double d2 = (c_plus * am - c_minus * ap) / (c_minus - c_plus);
  return {d1, d2};
}

double solve_s_shock_velocity(double s_minus, double s_plus, double c, const ModelConfig& m) {
  if (s_minus == s_plus) {
    throw InputError("solve_s_shock_velocity: equal saturations carry no jump");
  }
  const double fm = eval_flux(s_minus, c, m).f;
  const double fp = eval_flux(s_plus, c, m).f;
  return (fp - fm) / (s_plus - s_minus);
}

std::pair<double, double> rh_residuals(const ShockData& sh, const ModelConfig& m) {
  const double fm = eval_flux(sh.s_minus, sh.c_minus, m).f;
  const double fp = eval_flux(sh.s_plus, sh.c_plus, m).f;
  const double am = eval_adsorption(sh.c_minus, m).a;
  const double ap = eval_adsorption(sh.c_plus, m).a;
  const double r1 = sh.v * (sh.s_plus - sh.s_minus) - (fp - fm);
  const double r2 = sh.v * ((sh.c_plus * sh.s_plus + ap) - (sh.c_minus * sh.s_minus + am)) -
                    (sh.c_plus * fp - sh.c_minus * fm);
  return {std::fabs(r1), std::fabs(r2)};
}

std::pair<double, double> rh_residuals_lagrange(const LagrangeShockData& lsh,
                                                const ModelConfig& m) {
  const double am = eval_adsorption(lsh.minus.zeta, m).a;
  const double ap = eval_adsorption(lsh.plus.zeta, m).a;
  const double r2 = lsh.v_star * (lsh.plus.zeta - lsh.minus.zeta) - (ap - am);
  if (lsh.minus.dry || lsh.plus.dry) {
    // The dry side sits at U = infinity with v* = 0; only the zeta relation
    // stays finite.
    return {std::fabs(lsh.v_star), std::fabs(r2)};
  }
  const double Fm = eval_F(lsh.minus.U, lsh.minus.zeta, m).F;
  const double Fp = eval_F(lsh.plus.U, lsh.plus.zeta, m).F;
  const double r1 = lsh.v_star * (lsh.plus.U - lsh.minus.U) - (Fp - Fm);
  return {std::fabs(r1), std::fabs(r2)};
}

RestrictionsVerdict restrictions_check(const ShockData& sh, const ModelConfig& m,
                                       double c1_norm) {
  RestrictionsVerdict out;
  const double norm = c1_norm > 0.0 ? c1_norm : f_c1_norm(m);
  auto fail = [&out](const std::string& why) {
    out.ok = false;
    out.violations.push_back(why);
  };
  if (!(sh.v > 0.0)) fail("velocity not strictly positive");
  if (!(sh.v < norm)) fail("velocity not below the C1 norm of the flux");
  if (sh.s_minus == 0.0) fail("s- = 0 cannot be the behind state of an admissible shock");
  if (sh.s_plus == sh.s_minus) fail("equal saturations carry no admissible jump");
  if (sh.c_plus > sh.c_minus + kZetaEqTol) fail("c+ > c- is never admissible");
  if (sh.s_plus == 0.0 && std::fabs(sh.c_plus - sh.c_minus) > kZetaEqTol) {
    fail("s+ = 0 requires c+ = c-");
  }
  return out;
}

bool oleinik_s_shock(double s_minus, double s_plus, double c, const ModelConfig& m) {
  const double v = solve_s_shock_velocity(s_minus, s_plus, c, m);
  const double f_minus = eval_flux(s_minus, c, m).f;
  const double sgn = (s_plus > s_minus) ? 1.0 : -1.0;
  auto psi = [&](double s) {
    return eval_flux(s, c, m).f - f_minus - v * (s - s_minus);
  };
  const int n = 513;
  const double lo = std::min(s_minus, s_plus);
  const double hi = std::max(s_minus, s_plus);
  for (int i = 1; i <= n; ++i) {
    const double s = lo + (hi - lo) * static_cast<double>(i) / (n + 1);
    const double p = psi(s) * sgn;
    if (p < -1e-12) return false;
    if (std::fabs(p) < 1e-10) {
      // Near-zero sample: certify the sign on a refined neighbourhood.
      const double h = (hi - lo) / (n + 1);
      for (int k = -64; k <= 64; ++k) {
        const double sr = s + h * static_cast<double>(k) / 64.0;
        if (sr <= lo || sr >= hi) continue;
        if (psi(sr) * sgn < -1e-12) return false;
      }
    }
  }
  // The defect is piecewise monotone between its stationary points (where
  // f_s = v), so checking the sign there certifies the whole interval and
  // catches slivers the uniform samples can straddle.
  auto slope_defect = [&](double s) { return eval_flux(s, c, m).f_s - v; };
  for (const Bracket& br : scan_sign_changes(slope_defect, lo, hi, 64)) {
    const double p = (br.lo == br.hi) ? br.lo : bisect(slope_defect, br.lo, br.hi, 1e-13);
    if (psi(p) * sgn < -1e-12) return false;
  }
  return true;
}

LaxVerdict lax_lagrange(const LagrangeShockData& lsh, const ModelConfig& m) {
  if (std::fabs(lsh.plus.zeta - lsh.minus.zeta) > kZetaEqTol) {
    throw WrongShockKindError("lax_lagrange: zeta jumps across the shock");
  }
  if (lsh.plus.dry) {
    throw InputError("lax_lagrange: DRY plus side is not a U-shock");
  }
  const double zeta = lsh.plus.zeta;
  LaxVerdict out;
  const double fu_plus = eval_F(lsh.plus.U, zeta, m).F_U;
  out.lo_residual = lsh.v_star - fu_plus;
  const double fu_minus = lsh.minus.dry ? 0.0 : eval_F(lsh.minus.U, zeta, m).F_U;
  out.hi_residual = fu_minus - lsh.v_star;
  const double tol = 1e-12;
  const bool lo_ok = out.lo_residual >= -tol;
  const bool hi_ok = out.hi_residual >= -tol;
  const bool both_tight = std::fabs(out.lo_residual) <= tol && std::fabs(out.hi_residual) <= tol;
  out.boundary_case = both_tight && lsh.minus.dry;
  out.holds = lo_ok && hi_ok && (!both_tight || lsh.minus.dry);
  return out;
}

SStarResult s_star(const ModelConfig& m) {
  SStarResult out{};
  // Chord-line bound on the worst slice (c = 0 for a flux decreasing in c).
  const double h = adsorption_chord(1.0, 0.0, m);
  const double v_thr = 1.0 / (1.0 + h);
  auto line_defect = [&](double s) { return eval_flux(s, 0.0, m).f - v_thr * (s + h); };
  auto br = scan_first_sign_change(line_defect, 1e-9, 1.0 - 1e-9, 1024);
  if (!br) throw ModelShapeError("s_star: chord line never crosses the flux");
  out.s_star_c = (br->lo == br->hi) ? br->lo : bisect(line_defect, br->lo, br->hi, 1e-13);

  // Lower convex hull of f(.,c): the straight portion runs from the tangency
  // point of the line through (1,1) up to s = 1. T(s) = 1 - f - f_s (1-s)
  // decreases on the convex piece and rises back to 0 at s = 1, so its
  // unique root below the inflection is the tangency.
  out.s_star_s = 1.0;
  for (int k = 0; k < 33; ++k) {
    const double c = static_cast<double>(k) / 32.0;
    const double sI = inflection_s(c, m);
    auto tang = [&](double s) {
      const FluxEval fe = eval_flux(s, c, m);
      return 1.0 - fe.f - fe.f_s * (1.0 - s);
    };
    auto brt = scan_first_sign_change(tang, 1e-9, sI, 1024);
    if (!brt) throw ModelShapeError("s_star: no hull tangency below the inflection");
    const double st = (brt->lo == brt->hi) ? brt->lo : bisect(tang, brt->lo, brt->hi, 1e-13);
    out.s_star_s = std::min(out.s_star_s, st);
  }
  out.s_star = std::min(out.s_star_c, out.s_star_s);
  return out;
}

namespace {

struct SideRoots {
  std::vector<double> roots;
  bool tangent = false;
};

// Root pattern of g(s) = f(s,c) - v(s+d1) on one boundary slice. g(0) < 0 and
// g has a single interior maximum on the concave side of the flux, so the
// pattern is fully determined by the sign of g at that maximum and at s = 1.
SideRoots side_roots(double c, double v, double d1, const ModelConfig& m, double g_at_one) {
  SideRoots out;
  auto g = [&](double s) { return eval_flux(s, c, m).f - v * (s + d1); };
  const double sI = inflection_s(c, m);
  const double fs_max = eval_flux(sI, c, m).f_s;
  if (v >= fs_max) return out;  // g decreasing past its single hump: no roots
  auto dg = [&](double s) { return eval_flux(s, c, m).f_s - v; };
  const double p2 = bisect(dg, sI, 1.0 - 1e-14, 1e-13);
  const double gmax = g(p2);
  if (gmax < -kTangencyTol) return out;
  if (std::fabs(gmax) <= kTangencyTol) {
    out.roots.push_back(p2);
    out.tangent = true;
    return out;
  }
  out.roots.push_back(bisect(g, 0.0, p2, 1e-13));
  if (g_at_one < -kBorderTol) {
    out.roots.push_back(bisect(g, p2, 1.0, 1e-13));
  } else if (std::fabs(g_at_one) <= kBorderTol) {
    out.roots.push_back(1.0);
  }
  return out;
}

}  // namespace

NullclineType classify_nullclines(double c_minus, double c_plus, double v,
                                  const ModelConfig& m) {
  if (c_minus == c_plus) {
    throw InputError("classify_nullclines: c- == c+ is an s-shock, not a c-shock");
  }
  if (!(v > 0.0)) throw InputError("classify_nullclines: v must be positive");
  const double d1 = d_coeffs(c_minus, c_plus, m).first;
  const double g_one = 1.0 - v * (1.0 + d1);  // same on both boundaries

  NullclineType out;
  SideRoots sm = side_roots(c_minus, v, d1, m, g_one);
  SideRoots sp = side_roots(c_plus, v, d1, m, g_one);
  out.roots_minus = sm.roots;
  out.roots_plus = sp.roots;
  out.tangent_minus = sm.tangent;
  out.tangent_plus = sp.tangent;
  out.border_root = std::fabs(g_one) <= kBorderTol && (!sm.roots.empty() || !sp.roots.empty());

  const size_t nm = sm.roots.size();
  const size_t np = sp.roots.size();
  if (out.border_root) {
    out.cls = NullclineClass::Type0I;
  } else if ((sm.tangent && np == 2) || (sp.tangent && nm == 2)) {
    out.cls = NullclineClass::TypeI_II;
  } else if (nm == 0 && np == 0) {
    out.cls = NullclineClass::Empty;
  } else if (nm == 1 && np == 1) {
    out.cls = NullclineClass::Type0;
  } else if (nm == 2 && np == 2) {
    out.cls = NullclineClass::TypeI;
  } else if (nm == 0 || np == 0) {
    out.cls = NullclineClass::TypeII;
  } else {
    // Mixed 1/2 counts only arise from tolerance edges; treat as Type I with
    // the single root standing for a merged pair.
    out.cls = NullclineClass::TypeI_II;
  }
  return out;
}

namespace {

// 1-based index of the nullcline root matching s, or 0 when none is close.
int match_root(double s, const std::vector<double>& roots, double tol = 1e-6) {
  for (size_t i = 0; i < roots.size(); ++i) {
    if (std::fabs(s - roots[i]) <= tol) return static_cast<int>(i) + 1;
  }
  return 0;
}

}  // namespace

Admissibility admissible(const ShockData& sh, const ModelConfig& m, double c1_norm) {
  const auto [r1, r2] = rh_residuals(sh, m);
  if (r1 > 1e-8 || r2 > 1e-8) {
    throw InputError("admissible: states violate the Rankine-Hugoniot relations");
  }
  const RestrictionsVerdict rv = restrictions_check(sh, m, c1_norm);
  if (!rv.ok) return {false, rv.violations.front()};

  if (std::fabs(sh.c_plus - sh.c_minus) <= kZetaEqTol) {
    const bool ok = oleinik_s_shock(sh.s_minus, sh.s_plus, sh.c_minus, m);
    return {ok, ok ? "chord condition holds" : "chord condition violated"};
  }

  const NullclineType nt = classify_nullclines(sh.c_minus, sh.c_plus, sh.v, m);
  const int im = match_root(sh.s_minus, nt.roots_minus);
  const int ip = match_root(sh.s_plus, nt.roots_plus);
  if (im == 0 || ip == 0) {
    throw InputError("admissible: shock states do not sit on the nullcline boundaries");
  }
  const bool type_with_exclusion =
      nt.cls == NullclineClass::TypeI || nt.cls == NullclineClass::Type0I;
  if (type_with_exclusion && im == 2 && ip == 1 && !nt.tangent_minus) {
    return {false, "no connecting trajectory (upper-minus to lower-plus crossing)"};
  }
  return {true, "connected critical points"};
}

LagrangeShockData map_shock(const ShockData& sh, const ModelConfig& m) {
  if (sh.s_minus == 0.0) {
    throw InputError("map_shock: s- = 0 has no Lagrange image");
  }
  LagrangeShockData out;
  out.plus = to_lagrange(sh.s_minus, sh.c_minus, m);
  if (sh.s_plus == 0.0) {
    if (std::fabs(sh.c_plus - sh.c_minus) > kZetaEqTol) {
      throw InputError("map_shock: s+ = 0 requires c+ = c-");
    }
    out.minus = LagrangeState::dry_state(sh.c_plus);
    out.v_star = 0.0;
    return out;
  }
  out.minus = to_lagrange(sh.s_plus, sh.c_plus, m);
  if (std::fabs(out.plus.zeta - out.minus.zeta) > kZetaEqTol) {
    out.v_star = adsorption_chord(out.plus.zeta, out.minus.zeta, m);
  } else {
    const double Fp = eval_F(out.plus.U, out.plus.zeta, m).F;
    const double Fm = eval_F(out.minus.U, out.minus.zeta, m).F;
    if (out.plus.U == out.minus.U) {
      throw InputError("map_shock: zero jump in both Lagrange components");
    }
    out.v_star = (Fp - Fm) / (out.plus.U - out.minus.U);
  }
  return out;
}

ShockData unmap_shock(const LagrangeShockData& lsh, const ModelConfig& m) {
  if (lsh.plus.dry) {
    throw InputError("unmap_shock: DRY plus side corresponds to s- = 0 (unmappable)");
  }
  ShockData out;
  const SC behind = from_lagrange(lsh.plus, m);
  out.s_minus = behind.s;
  out.c_minus = behind.c;
  if (lsh.minus.dry) {
    out.s_plus = 0.0;
    out.c_plus = lsh.minus.zeta;
  } else {
    const SC ahead = from_lagrange(lsh.minus, m);
    out.s_plus = ahead.s;
    out.c_plus = ahead.c;
  }
  const double fm = eval_flux(out.s_minus, out.c_minus, m).f;
  const double fp = out.s_plus == 0.0 ? 0.0 : eval_flux(out.s_plus, out.c_plus, m).f;
  if (std::fabs(out.s_plus - out.s_minus) > 1e-14) {
    out.v = (fp - fm) / (out.s_plus - out.s_minus);
  } else {
    const double am = eval_adsorption(out.c_minus, m).a;
    const double ap = eval_adsorption(out.c_plus, m).a;
    out.v = (out.c_plus * fp - out.c_minus * fm) /
            ((out.c_plus * out.s_plus + ap) - (out.c_minus * out.s_minus + am));
  }
  return out;
}

}  // namespace chemflood
