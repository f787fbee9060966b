#include "chemflood/tw_ode.hpp"

#include <algorithm>
#include <cmath>

namespace chemflood {

TWParams TWParams::from_shock(const ShockData& sh, const ModelConfig& m) {
  TWParams p;
  p.model = m;
  p.v = sh.v;
  if (std::fabs(sh.c_plus - sh.c_minus) > 1e-12) {
    auto [d1, d2] = d_coeffs(sh.c_minus, sh.c_plus, m);
    p.d1 = d1;
    p.d2 = d2;
  } else {
    if (!(sh.v != 0.0)) throw InputError("TWParams: zero velocity");
    const double c = sh.c_minus;
    p.d1 = eval_flux(sh.s_minus, c, m).f / sh.v - sh.s_minus;
    p.d2 = p.d1 * c - eval_adsorption(c, m).a;
  }
  return p;
}

FieldVal vector_field(double s, double c, const TWParams& p) {
  const double f = eval_flux(s, c, p.model).f;
  const double a = eval_adsorption(c, p.model).a;
  return FieldVal{f - p.v * (s + p.d1), p.v * (p.d1 * c - p.d2 - a)};
}

namespace {

struct Jacobian {
  // Lower-triangular coupling: d(dc)/ds = 0.
  double a11, a12, a22;
};

Jacobian jacobian_at(double s, double c, const TWParams& p) {
  const FluxEval fe = eval_flux(s, c, p.model);
  const AdsorptionEval ae = eval_adsorption(c, p.model);
  return Jacobian{fe.f_s - p.v, fe.f_c, p.v * (p.d1 - ae.a_c)};
}

struct EigenDir {
  double lambda;
  double es, ec;  // unit eigenvector
};

std::vector<EigenDir> eigen_dirs(const Jacobian& j) {
  std::vector<EigenDir> out;
  out.push_back({j.a11, 1.0, 0.0});
  double es = 0.0, ec = 1.0;
  const double gap = j.a22 - j.a11;
  if (std::fabs(gap) > 1e-14) {
    es = j.a12 / gap;
    const double nrm = std::hypot(es, 1.0);
    es /= nrm;
    ec = 1.0 / nrm;
  }
  out.push_back({j.a22, es, ec});
  return out;
}

}  // namespace

Trajectory integrate_orbit(const TWParams& p, double s0, double c0, double target_s,
                           double target_c, const IntegrateOptions& opt) {
  Trajectory tr;
  double s = s0, c = c0, xi = 0.0;
  double h = 1e-3;
  const double dir = opt.reverse ? -1.0 : 1.0;
  double raw_speed = 0.0;
  // Unit-speed (arc-length) parameterization: the orbit curves are the same,
  // but the crawl toward critical points with tiny eigenvalues becomes a
  // uniform-rate approach, so the target test cannot starve.
  auto field = [&](double ss, double cc) {
    FieldVal f = vector_field(std::clamp(ss, 0.0, 1.0), std::clamp(cc, 0.0, 1.0), p);
    const double mag = std::hypot(f.ds, f.dc);
    raw_speed = mag;
    if (mag < 1e-300) return FieldVal{0.0, 0.0};
    return FieldVal{dir * f.ds / mag, dir * f.dc / mag};
  };
  auto dist_to_target = [&](double ss, double cc) {
    return std::hypot(ss - target_s, cc - target_c);
  };
  tr.min_target_dist = dist_to_target(s, c);
  tr.samples.push_back({xi, s, c});

  // Bogacki-Shampine 3(2) embedded pair with an adaptive arc-length step.
  long step_count = 0;
  int since_store = 0;
  while (true) {
    if (++step_count > opt.max_steps || xi > opt.max_xi) {
      tr.termination = Termination::MaxSteps;
      break;
    }
    const FieldVal k1 = field(s, c);
    const double speed_here = raw_speed;
    if (dist_to_target(s, c) < opt.target_radius) {
      tr.termination = Termination::ConvergedToTarget;
      break;
    }
    if (speed_here < 1e-12) {
      tr.termination = Termination::Stalled;
      break;
    }
    const FieldVal k2 = field(s + 0.5 * h * k1.ds, c + 0.5 * h * k1.dc);
    const FieldVal k3 = field(s + 0.75 * h * k2.ds, c + 0.75 * h * k2.dc);
    const double s3 = s + h * (2.0 * k1.ds + 3.0 * k2.ds + 4.0 * k3.ds) / 9.0;
    const double c3 = c + h * (2.0 * k1.dc + 3.0 * k2.dc + 4.0 * k3.dc) / 9.0;
    const FieldVal k4 = field(s3, c3);
    const double err_s = h * (-5.0 * k1.ds / 72.0 + k2.ds / 12.0 + k3.ds / 9.0 - k4.ds / 8.0);
    const double err_c = h * (-5.0 * k1.dc / 72.0 + k2.dc / 12.0 + k3.dc / 9.0 - k4.dc / 8.0);
    const double err = std::hypot(err_s, err_c);
    if (err > opt.abs_tol && h > 1e-12) {
      h = std::max(1e-12, 0.9 * h * std::cbrt(opt.abs_tol / err));
      continue;
    }
    s = s3;
    c = c3;
    xi += h;
    if (err > 0.0) h = std::min(opt.max_h, 0.9 * h * std::cbrt(opt.abs_tol / err));
    const bool outside = s < -1e-12 || s > 1.0 + 1e-12 || c < -1e-12 || c > 1.0 + 1e-12;
    s = std::clamp(s, 0.0, 1.0);
    c = std::clamp(c, 0.0, 1.0);
    tr.min_target_dist = std::min(tr.min_target_dist, dist_to_target(s, c));
    if (++since_store >= opt.store_every) {
      tr.samples.push_back({xi, s, c});
      since_store = 0;
    }
    if (outside) {
      tr.termination = Termination::LeftDomain;
      break;
    }
  }
  tr.samples.push_back({xi, s, c});
  tr.min_target_dist = std::min(tr.min_target_dist, dist_to_target(s, c));
  return tr;
}

ConnectionResult connection_exists(const ShockData& sh, const ModelConfig& m) {
  if (std::fabs(sh.c_plus - sh.c_minus) <= 1e-12) {
    throw WrongShockKindError("connection_exists: s-shocks use the 1-D chord test");
  }
  ConnectionResult res;
  if (sh.c_plus > sh.c_minus) {
    // c' keeps one sign between the critical concentrations, pointing away
    // from c+; no orbit can raise c.
    res.verdict = Connection::No;
    res.note = "c component has a fixed sign away from c+";
    return res;
  }
  const TWParams p = TWParams::from_shock(sh, m);
  const double seed = 1e-6;
  const IntegrateOptions opt;

  const Jacobian js = jacobian_at(sh.s_minus, sh.c_minus, p);
  const Jacobian jt = jacobian_at(sh.s_plus, sh.c_plus, p);
  const double lambda_gap = 1e-8;  // |eigenvalue| below this is a borderline case
  bool borderline = std::fabs(js.a11) < lambda_gap || std::fabs(jt.a11) < lambda_gap;

  bool any_unstable = false;
  double best = 1e300;
  // Forward shots along unstable directions of the source.
  for (const EigenDir& e : eigen_dirs(js)) {
    if (e.lambda <= 0.0) continue;
    any_unstable = true;
    for (double sign : {1.0, -1.0}) {
      Trajectory tr = integrate_orbit(p, sh.s_minus + sign * seed * e.es,
                                      sh.c_minus + sign * seed * e.ec, sh.s_plus, sh.c_plus, opt);
      best = std::min(best, tr.min_target_dist);
      if (tr.termination == Termination::ConvergedToTarget) {
        res.verdict = Connection::Yes;
        res.min_dist = tr.min_target_dist;
        res.note = "forward shot reached the target";
        return res;
      }
    }
  }
  if (!any_unstable) {
    res.verdict = Connection::No;
    res.min_dist = best;
    res.note = "no unstable direction at the source";
    return res;
  }
  // A saddle target (one stable direction) is only reachable along its stable
  // manifold; trace that manifold backward and test whether it emanates from
  // the source.
  for (const EigenDir& e : eigen_dirs(jt)) {
    if (e.lambda >= 0.0) continue;
    IntegrateOptions back = opt;
    back.reverse = true;
    for (double sign : {1.0, -1.0}) {
      Trajectory tr = integrate_orbit(p, sh.s_plus + sign * seed * e.es,
                                      sh.c_plus + sign * seed * e.ec, sh.s_minus, sh.c_minus, back);
      best = std::min(best, tr.min_target_dist);
      if (tr.termination == Termination::ConvergedToTarget) {
        res.verdict = Connection::Yes;
        res.min_dist = tr.min_target_dist;
        res.note = "stable manifold of the target emanates from the source";
        return res;
      }
    }
  }
  res.min_dist = best;
  if (best < 1e-2 || borderline) {
    res.verdict = Connection::Marginal;
    res.note = borderline ? "near-degenerate eigenvalue at a critical point"
                          : "orbit approached the target without entering the ball";
  } else {
    res.verdict = Connection::No;
    res.note = "all shots missed the target";
  }
  return res;
}

std::vector<PortraitCurve> phase_portrait(double c_minus, double c_plus, double v,
                                          const ModelConfig& m, int n) {
  if (n < 8) throw InputError("phase_portrait: grid too small");
  const double c_lo = std::min(c_minus, c_plus);
  const double c_hi = std::max(c_minus, c_plus);
  const double d1 = d_coeffs(c_minus, c_plus, m).first;
  std::vector<PortraitCurve> out;

  // s-nullcline f - v(s+d1) = 0 by marching squares with linear interpolation.
  auto g = [&](double s, double c) { return eval_flux(s, c, m).f - v * (s + d1); };
  PortraitCurve null_s{"nullcline_s", 0, {}};
  const double ds = 1.0 / (n - 1);
  const double dc = std::max(c_hi - c_lo, 1e-12) / (n - 1);
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const double s0 = i * ds, s1 = (i + 1) * ds;
      const double cc0 = c_lo + j * dc, cc1 = c_lo + (j + 1) * dc;
      const double v00 = g(s0, cc0), v10 = g(s1, cc0), v01 = g(s0, cc1), v11 = g(s1, cc1);
      auto cross = [&](double a, double b, double xa, double xb) {
        return xa + (xb - xa) * (a / (a - b));
      };
      std::vector<std::array<double, 2>> hits;
      if ((v00 < 0) != (v10 < 0)) hits.push_back({cross(v00, v10, s0, s1), cc0});
      if ((v01 < 0) != (v11 < 0)) hits.push_back({cross(v01, v11, s0, s1), cc1});
      if ((v00 < 0) != (v01 < 0)) hits.push_back({s0, cross(v00, v01, cc0, cc1)});
      if ((v10 < 0) != (v11 < 0)) hits.push_back({s1, cross(v10, v11, cc0, cc1)});
      if (hits.size() >= 2) {
        null_s.pts.push_back(hits[0]);
        null_s.pts.push_back(hits[1]);
      }
    }
  }
  out.push_back(std::move(null_s));

  // c-nullclines: the two horizontal boundary lines.
  for (int k = 0; k < 2; ++k) {
    PortraitCurve line{"nullcline_c", k, {}};
    const double cc = (k == 0) ? c_plus : c_minus;
    for (int i = 0; i < n; ++i) line.pts.push_back({i * ds, cc});
    out.push_back(std::move(line));
  }

  // Critical points from the root classification.
  const NullclineType nt = classify_nullclines(c_minus, c_plus, v, m);
  PortraitCurve crit{"critical", 0, {}};
  for (double s : nt.roots_minus) crit.pts.push_back({s, c_minus});
  for (double s : nt.roots_plus) crit.pts.push_back({s, c_plus});
  out.push_back(std::move(crit));

  // Representative trajectories seeded across the strip.
  TWParams p;
  p.model = m;
  p.v = v;
  auto [dd1, dd2] = d_coeffs(c_minus, c_plus, m);
  p.d1 = dd1;
  p.d2 = dd2;
  IntegrateOptions opt;
  opt.max_xi = 200.0;
  opt.max_steps = 200000;
  opt.store_every = 4;
  int idx = 0;
  for (int k = 0; k < 12; ++k) {
    const double s0 = 0.08 + 0.84 * (k % 4) / 3.0;
    const double c0 = c_lo + (c_hi - c_lo) * (0.2 + 0.6 * (k / 4) / 2.0);
    Trajectory tr = integrate_orbit(p, s0, c0, -1.0, -1.0, opt);
    PortraitCurve pc{"trajectory", idx++, {}};
    for (const auto& row : tr.samples) pc.pts.push_back({row[1], row[2]});
    out.push_back(std::move(pc));
  }
  return out;
}

}  // namespace chemflood
