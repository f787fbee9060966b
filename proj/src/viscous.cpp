#include "chemflood/viscous.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chemflood {

namespace {

// Largest characteristic speed of the hyperbolic part at one cell: the
// saturation family moves at f_s, the chemical family at f/(s + a_c).
double local_speed(double s, double c, const ModelConfig& m) {
  const FluxEval fe = eval_flux(s, c, m);
  const double ac = eval_adsorption(c, m).a_c;
  const double lam_c = fe.f / (s + ac);
  return std::max(fe.f_s, lam_c);
}

// Invert m_cons = c*s + a(c) for c in [0,1]; strictly monotone because
// s >= 0 and a_c > 0. Newton from the previous concentration, bisection
// fallback when the iteration leaves the bracket.
double invert_concentration(double m_cons, double s, double c_guess, const ModelConfig& m,
                            long step_hint) {
  const double a_top = eval_adsorption(1.0, m).a;
  const double g_lo = -m_cons;
  const double g_hi = s + a_top - m_cons;
  if (g_lo > 1e-10 || g_hi < -1e-10) {
    throw SolverError("viscous: concentration inversion bracket failed at step " +
                      std::to_string(step_hint));
  }
  if (g_lo >= 0.0) return 0.0;
  if (g_hi <= 0.0) return 1.0;
  double c = std::clamp(c_guess, 0.0, 1.0);
  for (int it = 0; it < 20; ++it) {
    const AdsorptionEval ae = eval_adsorption(c, m);
    const double g = c * s + ae.a - m_cons;
    if (std::fabs(g) < 1e-14) return c;
    const double next = c - g / (s + ae.a_c);
    if (!(next > 0.0 && next < 1.0)) break;
    if (std::fabs(next - c) < 1e-15) return next;
    c = next;
  }
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60 && (hi - lo) > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid * s + eval_adsorption(mid, m).a - m_cons;
    if (g < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GridField run(const ViscousConfig& cfg, const ModelConfig& m, RunStats* stats) {
  if (cfg.N < 256) throw InputError("viscous: N must be >= 256");
  if (!(cfg.epsilon > 0.0)) throw InputError("viscous: epsilon must be positive");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.4)) throw InputError("viscous: need 0 < CFL <= 0.4");
  if (!(cfg.T > 0.0 && cfg.L > 0.0)) throw InputError("viscous: T and L must be positive");

  const int N = cfg.N;
  const size_t n = static_cast<size_t>(N);
  const double dx = cfg.L / N;
  GridField field;
  field.x0 = 0.0;
  field.dx = dx;

  std::vector<double> s(n, cfg.right.s), c(n, cfg.right.c);

  // Global advective bound for the time step; states stay in the unit square,
  // so a sampled maximum over it is a safe cap.
  double alpha_max = 0.0;
  for (int i = 0; i <= 64; ++i) {
    for (int j = 0; j <= 64; ++j) {
      alpha_max = std::max(alpha_max, local_speed(i / 64.0, j / 64.0, m));
    }
  }
  const double dt_adv = cfg.cfl * dx / alpha_max;
  const double dt_diff = 0.4 * dx * dx / cfg.epsilon;
  // Monotonicity of the combined update needs the advective and diffusive
  // loads to share one budget: dt (alpha/dx + 2 eps/dx^2) <= 1.
  const double dt_mix = 2.0 * cfg.cfl / (alpha_max / dx + 2.0 * cfg.epsilon / (dx * dx));
  const double dt = std::min(std::min(dt_adv, dt_diff), dt_mix);

  const int frames = std::max(cfg.frame_count, 2);
  const double frame_dt = cfg.T / (frames - 1);
  double next_frame_t = frame_dt;
  double t = 0.0;
  RunStats local_stats;
  RunStats& st = stats ? *stats : local_stats;

  // Per-cell caches including the two ghost cells (index 0 = left ghost).
  std::vector<double> gs(n + 2), gc(n + 2), gf(n + 2), gm(n + 2), ga(n + 2), gden(n + 2);
  std::vector<double> flux_s(n + 1), flux_m(n + 1), rdif(n + 1);
  std::vector<double> s_new(n), m_new(n);

  auto snap = [&](double time) {
    Frame fr;
    fr.t = time;
    fr.s = s;
    fr.c = c;
    field.frames.push_back(std::move(fr));
  };
  snap(0.0);

  while (t < cfg.T - 1e-14) {
    const double step = std::min(dt, cfg.T - t);
    const double lam = step / dx;
    const double mu = cfg.epsilon * step / (dx * dx);

    gs[0] = cfg.left.s;
    gc[0] = cfg.left.c;
    for (size_t i = 0; i < n; ++i) {
      gs[i + 1] = s[i];
      gc[i + 1] = c[i];
    }
    gs[n + 1] = s[n - 1];
    gc[n + 1] = c[n - 1];
    for (size_t i = 0; i < n + 2; ++i) {
      const FluxEval fe = eval_flux(gs[i], gc[i], m);
      const AdsorptionEval ae = eval_adsorption(gc[i], m);
      gf[i] = fe.f;
      gm[i] = gc[i] * gs[i] + ae.a;
      gden[i] = gs[i] + ae.a_c;
      ga[i] = std::max(fe.f_s, fe.f / gden[i]);
    }

    for (size_t e = 0; e <= n; ++e) {
      const size_t l = e, r = e + 1;  // ghost-shifted cell indices
      const double alpha = std::max(ga[l], ga[r]);
      flux_s[e] = 0.5 * (gf[l] + gf[r]) - 0.5 * alpha * (gs[r] - gs[l]);
      flux_m[e] = 0.5 * (gc[l] * gf[l] + gc[r] * gf[r]) - 0.5 * alpha * (gm[r] - gm[l]);
      // The recovered concentration divides the c_xx increment by (s + a_c);
      // throttle the conductivity where that quotient would break the
      // explicit limit. This only bites in near-dry cells, where the
      // zero-flow region keeps the concentration frozen anyway.
      rdif[e] = std::min(1.0, 0.45 * std::min(gden[l], gden[r]) / mu);
    }

    double sum_s_before = 0.0, sum_m_before = 0.0;
    double sum_s_after = 0.0, sum_m_after = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const size_t g = i + 1;
      const double diff_s = mu * (gs[g + 1] - 2.0 * gs[g] + gs[g - 1]);
      const double cs_up = 0.5 * (gc[g] + gc[g + 1]) * (gs[g + 1] - gs[g]);
      const double cs_dn = 0.5 * (gc[g - 1] + gc[g]) * (gs[g] - gs[g - 1]);
      const double diff_m = mu * (cs_up - cs_dn) + mu * (rdif[i + 1] * (gc[g + 1] - gc[g]) -
                                                        rdif[i] * (gc[g] - gc[g - 1]));

      sum_s_before += gs[g];
      sum_m_before += gm[g];
      s_new[i] = gs[g] - lam * (flux_s[i + 1] - flux_s[i]) + diff_s;
      m_new[i] = gm[g] - lam * (flux_m[i + 1] - flux_m[i]) + diff_m;
      sum_s_after += s_new[i];
      sum_m_after += m_new[i];
    }

    // Interior flux/diffusion differences telescope, so the total change must
    // match the boundary terms exactly (fixed summation order).
    {
      const double bd_s =
          -lam * (flux_s[n] - flux_s[0]) + mu * ((gs[n + 1] - gs[n]) - (gs[1] - gs[0]));
      const double cs_left = 0.5 * (gc[0] + gc[1]) * (gs[1] - gs[0]);
      const double cs_right = 0.5 * (gc[n] + gc[n + 1]) * (gs[n + 1] - gs[n]);
      const double bd_m = -lam * (flux_m[n] - flux_m[0]) +
                          mu * ((cs_right - cs_left) + rdif[n] * (gc[n + 1] - gc[n]) -
                                rdif[0] * (gc[1] - gc[0]));
      st.max_mass_residual_s =
          std::max(st.max_mass_residual_s, std::fabs((sum_s_after - sum_s_before) - bd_s));
      st.max_mass_residual_m =
          std::max(st.max_mass_residual_m, std::fabs((sum_m_after - sum_m_before) - bd_m));
    }

    const double m_top = eval_adsorption(1.0, m).a;
    for (size_t i = 0; i < n; ++i) {
      double sv = s_new[i];
      if (sv < 0.0 || sv > 1.0) {
        if (sv < -1e-12 || sv > 1.0 + 1e-12) ++st.clip_events;
        sv = std::clamp(sv, 0.0, 1.0);
      }
      s[i] = sv;
      double cv;
      if (sv < 1e-8) {
        // Zero-flow cells: the budget is adsorption-dominated; invert a alone.
        cv = invert_concentration(std::clamp(m_new[i], 0.0, m_top), 0.0, c[i], m, st.steps);
      } else {
        cv = invert_concentration(std::clamp(m_new[i], 0.0, sv + m_top), sv, c[i], m, st.steps);
      }
      c[i] = std::clamp(cv, 0.0, 1.0);
    }

    t += step;
    ++st.steps;
    if (t >= next_frame_t - 1e-12 || t >= cfg.T - 1e-14) {
      snap(t);
      while (next_frame_t <= t + 1e-12) next_frame_t += frame_dt;
    }
  }
  field.clip_events = st.clip_events;
  return field;
}

double front_speed(const GridField& field, double level, int component) {
  if (field.frames.size() < 2) throw MeasurementError("front_speed: need at least two frames");
  const size_t n_frames = field.frames.size();
  const size_t start = n_frames / 2;
  std::vector<double> ts, xs;
  for (size_t k = start; k < n_frames; ++k) {
    const Frame& fr = field.frames[k];
    const std::vector<double>& u = component == 0 ? fr.s : fr.c;
    double xc = -1.0;
    for (size_t i = 1; i < u.size(); ++i) {
      const double a = u[i - 1], b = u[i];
      if ((a >= level && b < level) || (a <= level && b > level)) {
        const double frac = (level - a) / (b - a);
        xc = field.x_center(static_cast<int>(i - 1)) + frac * field.dx;
      }
    }
    if (xc < 0.0) {
      throw MeasurementError("front_speed: level never crossed in the fitting window");
    }
    ts.push_back(fr.t);
    xs.push_back(xc);
  }
  const size_t cnt = ts.size();
  double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  for (size_t k = 0; k < cnt; ++k) {
    st += ts[k];
    sx += xs[k];
    stt += ts[k] * ts[k];
    stx += ts[k] * xs[k];
  }
  const double denom = cnt * stt - st * st;
  if (std::fabs(denom) < 1e-30) throw MeasurementError("front_speed: degenerate time window");
  return (cnt * stx - st * sx) / denom;
}

const Frame& profile_at(const GridField& field, double time) {
  if (field.frames.empty()) throw InputError("profile_at: empty field");
  const double t0 = field.frames.front().t;
  const double t1 = field.frames.back().t;
  if (time < t0 - 1e-12 || time > t1 + 1e-12) {
    throw InputError("profile_at: time outside the run");
  }
  size_t best = 0;
  double best_d = 1e300;
  for (size_t k = 0; k < field.frames.size(); ++k) {
    const double d = std::fabs(field.frames[k].t - time);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return field.frames[best];
}

}  // namespace chemflood
