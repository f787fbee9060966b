#include "chemflood/lagrange.hpp"

#include <cmath>
#include <limits>

namespace chemflood {

LagrangeState to_lagrange(double s, double c, const ModelConfig& m) {
  if (!(s >= 0.0 && s <= 1.0 && c >= 0.0 && c <= 1.0)) {
    throw InputError("to_lagrange: (s,c) outside the unit square");
  }
  if (s == 0.0) return LagrangeState::dry_state(c);
  return LagrangeState::wet(1.0 / eval_flux(s, c, m).f, c);
}

double saturation_from_U(double U, double zeta, const ModelConfig& m) {
  if (!(U >= 1.0)) throw InputError("saturation_from_U: U must be >= 1");
  if (U == 1.0) return 1.0;
  const double target = 1.0 / U;
  auto fn = [&](double s) { return eval_flux(s, zeta, m).f - target; };
  double lo = 0.0, hi = 1.0;  // f(0)=0 < target < 1 = f(1), f monotone in s
  double flo = -target;
  for (int i = 0; i < 200 && (hi - lo) > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  // Newton polish inside the final bracket sharpens the inverse enough for
  // round trips at large U, where d(1/f)/ds is of order U^2.
  double s = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const FluxEval fe = eval_flux(s, zeta, m);
    const double step = (fe.f - target) / fe.f_s;
    const double next = s - step;
    if (!(next > lo && next < hi)) break;
    s = next;
  }
  return s;
}

SC from_lagrange(const LagrangeState& st, const ModelConfig& m) {
  if (st.dry) throw InputError("from_lagrange: DRY state has no preimage");
  if (!(st.U >= 1.0)) throw InputError("from_lagrange: U < 1 is outside the range of 1/f");
  return SC{saturation_from_U(st.U, st.zeta, m), st.zeta};
}

FEval eval_F(double U, double zeta, const ModelConfig& m) {
  if (!(U >= 1.0)) throw InputError("eval_F: U must be >= 1");
  const double inf = std::numeric_limits<double>::infinity();
  if (U == 1.0) return FEval{-1.0, inf, -inf};
  const double s = saturation_from_U(U, zeta, m);
  const FluxEval fe = eval_flux(s, zeta, m);
  FEval out;
  out.F = -s / fe.f;
  out.F_U = fe.f / fe.f_s - s;
  const double r = fe.f / fe.f_s;
  out.F_UU = flux_ss(s, zeta, m) * r * r * r;
  return out;
}

double F_zeta(double U, double zeta, const ModelConfig& m) {
  if (!(U >= 1.0)) throw InputError("F_zeta: U must be >= 1");
  if (U == 1.0) return 0.0;  // F(1,zeta) = -1 for every zeta
  const double s = saturation_from_U(U, zeta, m);
  const FluxEval fe = eval_flux(s, zeta, m);
  return U * fe.f_c / fe.f_s;
}

double U_max(double zeta, const ModelConfig& m) {
  return 1.0 / eval_flux(water_front_s(zeta, m), zeta, m).f;
}

double U_inflection(double zeta, const ModelConfig& m) {
  return 1.0 / eval_flux(inflection_s(zeta, m), zeta, m).f;
}

FluxCurveL make_flux_curve(double zeta, const ModelConfig& m) {
  return FluxCurveL{&m, zeta, U_max(zeta, m), U_inflection(zeta, m)};
}

ValidationReport validate_F(const ModelConfig& m, int n) {
  ValidationReport rep;
  rep.degenerate_in_c = (m.flux.kc == 0.0);
  auto flag = [&rep](const std::string& check, double u, double z, const std::string& note) {
    rep.passed = false;
    rep.issues.push_back({check, u, z, note});
  };

  for (int j = 0; j <= n; ++j) {
    const double zeta = static_cast<double>(j) / n;
    const double umax = U_max(zeta, m);
    const double uinfl = U_inflection(zeta, m);
    if (!(umax > 1.0 && uinfl > umax)) {
      flag("curve_landmarks", umax, zeta, "expected 1 < U^max < U^I");
    }
    if (std::fabs(eval_F(1.0, zeta, m).F + 1.0) > 1e-12) {
      flag("F_at_one", 1.0, zeta, "F(1,zeta) != -1");
    }

    // F < 0 and the sign ladders on a log-spaced sweep.
    for (int i = 0; i <= n; ++i) {
      const double U = 1.0 + std::pow(10.0, -3.0 + 6.0 * i / n);  // 1+1e-3 .. 1+1e3
      const FEval fe = eval_F(U, zeta, m);
      if (!(fe.F < 0.0)) flag("F_negative", U, zeta, "F >= 0");
      if (U < umax && !(fe.F_U > 0.0)) flag("F_U_sign", U, zeta, "F_U <= 0 below U^max");
      if (U > umax && !(fe.F_U < 0.0)) flag("F_U_sign", U, zeta, "F_U >= 0 above U^max");
      if (U < uinfl && !(fe.F_UU < 0.0)) flag("F_UU_sign", U, zeta, "F_UU >= 0 below U^I");
      if (U > uinfl && !(fe.F_UU > 0.0)) flag("F_UU_sign", U, zeta, "F_UU <= 0 above U^I");
    }

    // Tail behaviour on the geometric ladder 10,100,...,1e6: F decreasing
    // toward -inf, |F_U| decreasing toward 0.
    double prevF = eval_F(10.0, zeta, m).F;
    double prevAbsFU = std::fabs(eval_F(10.0, zeta, m).F_U);
    for (double U = 100.0; U <= 1e6; U *= 10.0) {
      const FEval fe = eval_F(U, zeta, m);
      if (!(fe.F < prevF)) flag("F_to_minus_inf", U, zeta, "F not decreasing on the tail");
      const double absFU = std::fabs(fe.F_U);
      if (!(absFU < prevAbsFU)) flag("F_U_to_zero", U, zeta, "|F_U| not decreasing on the tail");
      prevF = fe.F;
      prevAbsFU = absFU;
    }
  }
  if (!(eval_F(1e6, 0.0, m).F < -100.0)) {
    flag("F_magnitude_tail", 1e6, 0.0, "F(1e6,0) not below -100");
  }

  if (!rep.degenerate_in_c) {
    Rng rng(kDefaultSeed);
    for (int k = 0; k < 1000; ++k) {
      const double U = 1.0 + std::pow(10.0, rng.uniform(-2.0, 3.0));
      const double zeta = rng.uniform(0.0, 1.0);
      if (!(F_zeta(U, zeta, m) < 0.0)) {
        flag("F_monotone_in_zeta", U, zeta, "F_zeta >= 0 with kc > 0");
      }
    }
  } else {
    rep.issues.push_back({"F_monotone_in_zeta", 0.0, 0.0, "degenerate: F_zeta == 0 (kc = 0)"});
  }
  return rep;
}

}  // namespace chemflood
