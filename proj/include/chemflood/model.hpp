#ifndef CHEMFLOOD_MODEL_HPP
#define CHEMFLOOD_MODEL_HPP

#include <string>
#include <vector>

#include "chemflood/numerics.hpp"

namespace chemflood {

/// Corey-quadratic fractional flow: f(s,c) = s^2 / (s^2 + M0(1+kc*c)(1-s)^2).
/// M0 is the end-point mobility ratio, kc the polymer thickening coefficient.
/// kc = 0 is accepted as a degenerate (c-independent) flux; validate_model
/// reports it as such instead of rejecting it.
struct FluxParams {
  double M0 = 1.0;
  double kc = 1.0;
};

/// Langmuir isotherm: a(c) = A*c / (1 + B*c).
struct AdsorptionParams {
  double A = 0.5;
  double B = 1.0;
};

struct ModelConfig {
  FluxParams flux;
  AdsorptionParams adsorption;
};

/// Validates parameter bounds (M0 > 0, kc >= 0, A > 0, B > 0) and returns the
/// config. Throws InputError on violation.
ModelConfig make_model(const FluxParams& flux = {}, const AdsorptionParams& ads = {});

struct FluxEval {
  double f;
  double f_s;
  double f_c;
};

struct AdsorptionEval {
  double a;
  double a_c;
  double a_cc;
};

/// Flux and analytic first derivatives at (s,c) in the closed unit square.
FluxEval eval_flux(double s, double c, const ModelConfig& m);

/// Second s-derivative of the flux.
double flux_ss(double s, double c, const ModelConfig& m);

/// Langmuir value and derivatives at c in [0,1].
AdsorptionEval eval_adsorption(double c, const ModelConfig& m);

struct ValidationIssue {
  std::string check;
  double s = 0.0;
  double c = 0.0;
  std::string note;
};

struct ValidationReport {
  bool passed = true;
  bool degenerate_in_c = false;  // kc == 0: f_c vanishes identically
  std::vector<ValidationIssue> issues;
};

/// Grid sweep over an n-by-n interior grid checking the structural assumptions
/// the rest of the toolkit relies on: f_s > 0, exactly one sign change of f_ss
/// per c-slice, f_c < 0 for kc > 0, a_c > 0, a_cc < 0.
ValidationReport validate_model(const ModelConfig& m, int n = 128);

/// Inflection saturation s^I(c): the unique root of f_ss(.,c) in (0,1).
double inflection_s(double c, const ModelConfig& m);

/// Water-front saturation s^wf(c): the unique root of f - s*f_s in (s^I(c),1).
/// For the Corey family this equals sqrt(M/(M+1)) with M = M0(1+kc*c).
double water_front_s(double c, const ModelConfig& m);

/// Grid estimate of the C^1 norm: max over a 256x256 grid of |f_s| + |f_c|.
double f_c1_norm(const ModelConfig& m, int n = 256);

}  // namespace chemflood

#endif  // CHEMFLOOD_MODEL_HPP
