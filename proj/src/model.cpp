#include "chemflood/model.hpp"

#include <cmath>

namespace chemflood {

namespace {

double mobility(double c, const ModelConfig& m) {
  return m.flux.M0 * (1.0 + m.flux.kc * c);
}

void check_unit_square(double s, double c) {
  if (!(s >= 0.0 && s <= 1.0 && c >= 0.0 && c <= 1.0)) {
    throw InputError("eval_flux: (s,c) outside the unit square");
  }
}

}  // namespace

ModelConfig make_model(const FluxParams& flux, const AdsorptionParams& ads) {
  if (!(flux.M0 > 0.0)) throw InputError("make_model: M0 must be positive");
  if (!(flux.kc >= 0.0)) throw InputError("make_model: kc must be nonnegative");
  if (!(ads.A > 0.0)) throw InputError("make_model: A must be positive");
  if (!(ads.B > 0.0)) throw InputError("make_model: B must be positive");
  return ModelConfig{flux, ads};
}

FluxEval eval_flux(double s, double c, const ModelConfig& m) {
  check_unit_square(s, c);
  const double mob = mobility(c, m);
  const double w = 1.0 - s;
  const double den = s * s + mob * w * w;
  FluxEval out;
  out.f = s * s / den;
  out.f_s = 2.0 * mob * s * w / (den * den);
  out.f_c = -m.flux.M0 * m.flux.kc * s * s * w * w / (den * den);
  return out;
}

double flux_ss(double s, double c, const ModelConfig& m) {
  check_unit_square(s, c);
  const double mob = mobility(c, m);
  const double w = 1.0 - s;
  const double den = s * s + mob * w * w;
  const double dden = 2.0 * (s - mob * w);
  // d/ds of 2*mob*s*(1-s)/den^2
  const double num = (1.0 - 2.0 * s) * den - 2.0 * s * w * dden;
  return 2.0 * mob * num / (den * den * den);
}

AdsorptionEval eval_adsorption(double c, const ModelConfig& m) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw InputError("eval_adsorption: c outside [0,1]");
  }
  const double A = m.adsorption.A;
  const double B = m.adsorption.B;
  const double q = 1.0 + B * c;
  return AdsorptionEval{A * c / q, A / (q * q), -2.0 * A * B / (q * q * q)};
}

ValidationReport validate_model(const ModelConfig& m, int n) {
  if (n < 64) throw InputError("validate_model: n must be >= 64");
  ValidationReport rep;
  rep.degenerate_in_c = (m.flux.kc == 0.0);

  auto flag = [&rep](const std::string& check, double s, double c, const std::string& note) {
    rep.passed = false;
    rep.issues.push_back({check, s, c, note});
  };

  for (int j = 0; j < n; ++j) {
    const double c = (j + 0.5) / n;
    int ss_sign_changes = 0;
    double prev_ss = 0.0;
    bool have_prev = false;
    for (int i = 0; i < n; ++i) {
      const double s = (i + 0.5) / n;
      const FluxEval fe = eval_flux(s, c, m);
      if (!(fe.f_s > 0.0)) flag("f_s_positive", s, c, "f_s <= 0 at interior point");
      if (!rep.degenerate_in_c && !(fe.f_c < 0.0)) {
        flag("f_monotone_in_c", s, c, "f_c >= 0 with kc > 0");
      }
      const double ss = flux_ss(s, c, m);
      if (have_prev && prev_ss != 0.0 && ss != 0.0 && (prev_ss < 0.0) != (ss < 0.0)) {
        ++ss_sign_changes;
      }
      prev_ss = ss;
      have_prev = true;
    }
    if (ss_sign_changes != 1) {
      flag("single_inflection", 0.0, c, "f_ss sign changes " + std::to_string(ss_sign_changes) +
                                            " times along the slice");
    }
  }
  if (rep.degenerate_in_c) {
    rep.issues.push_back({"f_monotone_in_c", 0.0, 0.0, "degenerate: f_c == 0 identically (kc = 0)"});
  }

  for (int j = 0; j < n; ++j) {
    const double c = (j + 0.5) / n;
    const AdsorptionEval ae = eval_adsorption(c, m);
    if (!(ae.a_c > 0.0)) flag("a_c_positive", 0.0, c, "a_c <= 0");
    if (!(ae.a_cc < 0.0)) flag("a_concave", 0.0, c, "a_cc >= 0");
  }
  return rep;
}

double inflection_s(double c, const ModelConfig& m) {
  auto fn = [&](double s) { return flux_ss(s, c, m); };
  const double lo = 1e-9;
  const double hi = 1.0 - 1e-9;
  auto br = scan_first_sign_change(fn, lo, hi, 1024);
  if (!br) throw ModelShapeError("inflection_s: f_ss has no sign change on (0,1)");
  if (br->lo == br->hi) return br->lo;
  return bisect(fn, br->lo, br->hi, 1e-13);
}

double water_front_s(double c, const ModelConfig& m) {
  const double sI = inflection_s(c, m);
  auto psi = [&](double s) {
    const FluxEval fe = eval_flux(s, c, m);
    return fe.f - s * fe.f_s;
  };
  // psi decreases on (0,s^I), increases after, psi(1)=1: the root sits in (s^I,1).
  auto br = scan_first_sign_change(psi, sI, 1.0 - 1e-12, 1024);
  if (!br) throw ModelShapeError("water_front_s: no root of f - s*f_s in (s^I,1)");
  if (br->lo == br->hi) return br->lo;
  return bisect(psi, br->lo, br->hi, 1e-13);
}

double f_c1_norm(const ModelConfig& m, int n) {
  double best = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double c = static_cast<double>(j) / n;
    for (int i = 0; i <= n; ++i) {
      const double s = static_cast<double>(i) / n;
      const FluxEval fe = eval_flux(s, c, m);
      const double v = std::fabs(fe.f_s) + std::fabs(fe.f_c);
      if (v > best) best = v;
    }
  }
  return best;
}

}  // namespace chemflood
