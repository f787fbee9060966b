#include "chemflood/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chemflood {

namespace {

constexpr double kSpeedTol = 1e-9;
constexpr double kStateTol = 1e-12;
const double kInf = std::numeric_limits<double>::infinity();

double cross(double ox, double oy, double ax, double ay, double bx, double by) {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

}  // namespace

Envelope envelope_of(const std::function<double(double)>& flux,
                     const std::function<double(double)>& flux_prime, double lo, double hi,
                     bool lower, int grid_n) {
  if (!(hi > lo)) throw InputError("envelope_of: empty interval");
  const int n = std::max(grid_n, 16);
  std::vector<double> xs(static_cast<size_t>(n) + 1), ys(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    // Hit the interval ends exactly; fan states must match them bitwise.
    xs[static_cast<size_t>(i)] =
        (i == n) ? hi : lo + (hi - lo) * static_cast<double>(i) / n;
    ys[static_cast<size_t>(i)] = flux(xs[static_cast<size_t>(i)]);
  }
  // Monotone-chain hull over the sampled graph. The lower hull keeps left
  // turns (increasing slopes), the upper hull right turns.
  std::vector<int> hull;
  for (int i = 0; i <= n; ++i) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull[hull.size() - 1];
      const double cr = cross(xs[a], ys[a], xs[b], ys[b], xs[i], ys[i]);
      const bool pop = lower ? (cr <= 0.0) : (cr >= 0.0);
      if (!pop) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }

  // Contact runs (consecutive sample indices) alternate with straight
  // segments (index gaps). Tangency endpoints of straight segments are then
  // refined by solving the slope-matching condition.
  struct Seg {
    double a, b;
    bool straight;
  };
  std::vector<Seg> segs;
  for (size_t k = 0; k + 1 < hull.size(); ++k) {
    const int i = hull[k], j = hull[k + 1];
    const bool straight = (j - i) > 1;
    if (!segs.empty() && !segs.back().straight && !straight) {
      segs.back().b = xs[j];  // extend the graph run
    } else {
      segs.push_back({xs[i], xs[j], straight});
    }
  }
  if (segs.empty()) segs.push_back({lo, hi, false});

  auto refine_tangency = [&](double anchor, double guess) {
    // Root of T(x) = flux(anchor) - flux(x) - flux'(x)(anchor - x).
    auto T = [&](double x) { return flux(anchor) - flux(x) - flux_prime(x) * (anchor - x); };
    double w = 2.0 * (hi - lo) / n;
    for (int attempt = 0; attempt < 8; ++attempt) {
      const double a = std::max(lo + 1e-14, guess - w);
      const double b = std::min(hi - 1e-14, guess + w);
      if (b > a && (T(a) < 0.0) != (T(b) < 0.0)) {
        return bisect(T, a, b, 1e-13);
      }
      w *= 2.0;
    }
    return guess;  // flat defect: the grid estimate is already at tolerance
  };

  for (size_t k = 0; k < segs.size(); ++k) {
    if (!segs[k].straight) continue;
    const bool a_interior = segs[k].a > lo + kStateTol;
    const bool b_interior = segs[k].b < hi - kStateTol;
    double a = segs[k].a, b = segs[k].b;
    // With a single inflection at most one end is an interior tangency, but
    // alternate a few times anyway so bitangent fluxes refine too.
    for (int pass = 0; pass < (a_interior && b_interior ? 40 : 1); ++pass) {
      const double a_prev = a, b_prev = b;
      if (a_interior) a = refine_tangency(b, a);
      if (b_interior) b = refine_tangency(a, b);
      if (std::fabs(a - a_prev) < 1e-14 && std::fabs(b - b_prev) < 1e-14) break;
    }
    segs[k].a = a;
    segs[k].b = b;
    if (k > 0) segs[k - 1].b = a;
    if (k + 1 < segs.size()) segs[k + 1].a = b;
  }

  // Sub-cell tangencies hide from the sampled hull at the interval ends: a
  // chord that leaves a domain endpoint must depart no steeper than the graph
  // (minorant) or no shallower (majorant); otherwise a short graph run and a
  // tangency sit inside the first cell. Recover those sonic attachments
  // analytically.
  {
    std::vector<Seg> fixed;
    const double tiny = 1e-13;
    for (const Seg& sg : segs) {
      if (!sg.straight || sg.b - sg.a < 1e-12) {
        fixed.push_back(sg);
        continue;
      }
      double a = sg.a, b = sg.b;
      auto slope = [&] { return (flux(b) - flux(a)) / (b - a); };
      const double da = flux_prime(a);
      const bool hidden_a = lower ? (da < slope() - tiny) : (da > slope() + tiny);
      if (hidden_a && a > lo - kStateTol) {
        const double t = refine_tangency(b, a + 0.5 * (hi - lo) / n);
        if (t > a + 1e-13 && t < b) {
          fixed.push_back({a, t, false});
          a = t;
        }
      }
      const double db = flux_prime(b);
      const bool hidden_b = lower ? (db > slope() + tiny) : (db < slope() - tiny);
      double graph_tail = -1.0;
      if (hidden_b) {
        const double t = refine_tangency(a, b - 0.5 * (hi - lo) / n);
        if (t < b - 1e-13 && t > a) {
          graph_tail = b;
          b = t;
        }
      }
      fixed.push_back({a, b, true});
      if (graph_tail > 0.0) fixed.push_back({b, graph_tail, false});
    }
    segs = std::move(fixed);
  }

  Envelope env;
  env.breakpoints.push_back(segs.front().a);
  for (const Seg& sg : segs) {
    if (sg.b - sg.a < 1e-13) continue;  // collapsed by refinement
    const double slope = (flux(sg.b) - flux(sg.a)) / (sg.b - sg.a);
    env.pieces.push_back({sg.a, sg.b, sg.straight, slope});
    env.breakpoints.push_back(sg.b);
  }
  if (env.pieces.empty()) {
    env.pieces.push_back({lo, hi, false, (flux(hi) - flux(lo)) / (hi - lo)});
    env.breakpoints = {lo, hi};
  }
  return env;
}

Envelope convex_envelope(double c, double s_lo, double s_hi, const ModelConfig& m, bool lower,
                         int grid_n) {
  if (!(0.0 <= s_lo && s_lo < s_hi && s_hi <= 1.0)) {
    throw InputError("convex_envelope: need 0 <= s_lo < s_hi <= 1");
  }
  return envelope_of([&](double s) { return eval_flux(s, c, m).f; },
                     [&](double s) { return eval_flux(s, c, m).f_s; }, s_lo, s_hi, lower, grid_n);
}

namespace {

// Turns an envelope into the wave sequence for data (u_left -> u_right),
// using `speed(u)` for rarefaction edges and tagging states via make_state.
template <typename SpeedFn, typename StateFn>
std::vector<Wave> waves_from_envelope(const Envelope& env, bool ascending, SpeedFn speed,
                                      StateFn make_state) {
  std::vector<Wave> waves;
  const auto emit = [&](double ua, double ub, bool straight, double slope) {
    Wave w;
    w.left = make_state(ua);
    w.right = make_state(ub);
    if (straight) {
      w.kind = WaveKind::Shock;
      w.speed_lo = w.speed_hi = slope;
    } else {
      w.kind = WaveKind::Rarefaction;
      w.speed_lo = speed(ua);
      w.speed_hi = speed(ub);
    }
    waves.push_back(w);
  };
  if (ascending) {
    for (const EnvelopePiece& p : env.pieces) emit(p.lo, p.hi, p.straight, p.slope);
  } else {
    for (auto it = env.pieces.rbegin(); it != env.pieces.rend(); ++it) {
      emit(it->hi, it->lo, it->straight, it->slope);
    }
  }
  return waves;
}

bool speeds_ordered(const std::vector<Wave>& waves, double tol = kSpeedTol) {
  double prev = -kInf;
  for (const Wave& w : waves) {
    if (w.speed_lo < prev - tol) return false;
    if (w.speed_hi < w.speed_lo - tol) return false;
    prev = w.speed_hi;
  }
  return true;
}

}  // namespace

WaveFan solve_bl(double s_left, double s_right, double c, const ModelConfig& m) {
  WaveFan fan;
  fan.coords = FanCoords::Original;
  fan.far_left = {s_left, c, false};
  fan.far_right = {s_right, c, s_right == 0.0};
  if (std::fabs(s_left - s_right) < 1e-14) return fan;
  const bool ascending = s_left < s_right;
  const Envelope env = convex_envelope(c, std::min(s_left, s_right), std::max(s_left, s_right),
                                       m, /*lower=*/ascending);
  fan.waves = waves_from_envelope(
      env, ascending, [&](double s) { return eval_flux(s, c, m).f_s; },
      [&](double s) { return FanState{s, c, s == 0.0}; });
  if (!speeds_ordered(fan.waves)) {
    throw StructuralError("solve_bl: envelope produced unordered wave speeds");
  }
  if (s_right == 0.0 && !fan.waves.empty()) {
    fan.zero_flow = ZeroFlowRegion{fan.waves.back().speed_hi, 0.0, c};
  }
  return fan;
}

WaveFan solve_zeta(double zeta_left, double zeta_right, const ModelConfig& m) {
  if (!(zeta_left >= 0.0 && zeta_left <= 1.0 && zeta_right >= 0.0 && zeta_right <= 1.0)) {
    throw InputError("solve_zeta: values must lie in [0,1]");
  }
  WaveFan fan;
  fan.coords = FanCoords::Lagrange;
  fan.far_left = {0.0, zeta_left, false};
  fan.far_right = {0.0, zeta_right, false};
  if (zeta_left == zeta_right) return fan;
  Wave w;
  w.left = fan.far_left;
  w.right = fan.far_right;
  if (zeta_left < zeta_right) {
    // Concave flux: an increasing jump is a single admissible shock.
    const double am = eval_adsorption(zeta_left, m).a;
    const double ap = eval_adsorption(zeta_right, m).a;
    w.kind = WaveKind::ZetaJump;
    w.speed_lo = w.speed_hi = (ap - am) / (zeta_right - zeta_left);
  } else {
    w.kind = WaveKind::Rarefaction;
    w.speed_lo = eval_adsorption(zeta_left, m).a_c;
    w.speed_hi = eval_adsorption(zeta_right, m).a_c;
  }
  fan.waves.push_back(w);
  return fan;
}

namespace {

// Scalar fan for U at fixed zeta from the envelope of F(.,zeta).
std::vector<Wave> u_fan(double u_left, double u_right, double zeta, const ModelConfig& m) {
  if (std::fabs(u_left - u_right) < 1e-14) return {};
  const bool ascending = u_left < u_right;
  const Envelope env = envelope_of(
      [&](double U) { return eval_F(U, zeta, m).F; },
      [&](double U) { return eval_F(U, zeta, m).F_U; }, std::min(u_left, u_right),
      std::max(u_left, u_right), /*lower=*/ascending);
  return waves_from_envelope(
      env, ascending, [&](double U) { return eval_F(U, zeta, m).F_U; },
      [&](double U) { return FanState{U, zeta, false}; });
}

double kappa(double U, double zeta, double sigma, const ModelConfig& m) {
  return eval_F(U, zeta, m).F - sigma * U;
}

// U with F_U(U,zeta) = sigma on the rising branch (1, U^max). Unique for
// sigma > 0 because F_U falls from +inf to 0 there.
double tangent_point(double zeta, double sigma, const ModelConfig& m) {
  const double umax = U_max(zeta, m);
  auto defect = [&](double U) { return eval_F(U, zeta, m).F_U - sigma; };
  return bisect(defect, 1.0 + 1e-13, umax, 1e-13);
}

// All U >= 1 with kappa(U) = rhs: at most one on each monotone branch of
// kappa around its maximum at the tangent point.
std::vector<double> kappa_roots(double rhs, double zeta, double sigma, const ModelConfig& m) {
  std::vector<double> roots;
  const double t = tangent_point(zeta, sigma, m);
  auto g = [&](double U) { return kappa(U, zeta, sigma, m) - rhs; };
  const double g1 = g(1.0);
  const double gt = g(t);
  if (gt < 0.0) return roots;  // maximum below target: no roots
  if (g1 >= 0.0) {
    roots.push_back(1.0 + 0.0);  // kappa(1) already above: branch enters at U=1
    if (g1 > 0.0) roots.pop_back();
  }
  if (g1 < 0.0 && gt > 0.0) roots.push_back(bisect(g, 1.0, t, 1e-13));
  double hi = std::max(2.0 * t, 4.0);
  int guard = 0;
  while (g(hi) > 0.0 && guard++ < 60) hi *= 2.0;
  if (g(hi) <= 0.0 && gt > 0.0) roots.push_back(bisect(g, t, hi, 1e-13));
  return roots;
}

// The crossing pattern with no connecting travelling wave: left state on the
// falling branch, right state on the rising branch, both strictly.
bool forbidden_crossing(double u_minus, double zeta_minus, double u_plus, double zeta_plus,
                        double sigma, const ModelConfig& m) {
  const double fu_m = eval_F(u_minus, zeta_minus, m).F_U;
  const double fu_p = eval_F(u_plus, zeta_plus, m).F_U;
  return fu_m < sigma - 1e-10 && fu_p > sigma + 1e-10;
}

struct LagrangeCandidate {
  double u1 = 0.0;  // minus (small-phi) side of the zeta-shock
  double u2 = 0.0;  // plus side
};

std::string kappa_diagnostic(double rhs, double zeta, double sigma, const ModelConfig& m) {
  std::ostringstream os;
  os << "chord-defect sweep (target " << rhs << "):";
  for (double U : {1.0, 1.2, 1.5, 2.0, 4.0, 16.0, 256.0}) {
    os << " g(" << U << ")=" << kappa(U, zeta, sigma, m) - rhs;
  }
  return os.str();
}

}  // namespace

WaveFan solve_system_lagrange(const LagrangeState& left, const LagrangeState& right,
                              const ModelConfig& m) {
  if (right.dry) {
    throw StructuralError("solve_system_lagrange: DRY right state is outside the data class");
  }
  WaveFan fan;
  fan.coords = FanCoords::Lagrange;
  fan.far_left = {left.dry ? 0.0 : left.U, left.zeta, left.dry};
  fan.far_right = {right.U, right.zeta, false};

  const double zl = left.zeta;
  const double zr = right.zeta;
  const bool zeta_jump = std::fabs(zl - zr) > 1e-12;
  if (zeta_jump && zl > zr) {
    throw StructuralError(
        "solve_system_lagrange: zeta_left > zeta_right needs a coupled fan through a "
        "zeta-rarefaction, which this solver does not construct");
  }

  if (!zeta_jump) {
    if (!left.dry) {
      fan.waves = u_fan(left.U, right.U, zr, m);
      if (!speeds_ordered(fan.waves)) {
        throw StructuralError("solve_system_lagrange: scalar fan has unordered speeds");
      }
      return fan;
    }
    // Dry left boundary: stationary shock, sonic when the data sits on the
    // rising branch of F.
    const double umax = U_max(zr, m);
    Wave bound;
    bound.kind = WaveKind::Shock;
    bound.left = FanState{0.0, zr, true};
    bound.speed_lo = bound.speed_hi = 0.0;
    if (right.U >= umax - 1e-12) {
      bound.right = FanState{right.U, zr, false};
      fan.waves.push_back(bound);
    } else {
      bound.right = FanState{umax, zr, false};
      fan.waves.push_back(bound);
      auto rest = u_fan(umax, right.U, zr, m);
      fan.waves.insert(fan.waves.end(), rest.begin(), rest.end());
    }
    if (!speeds_ordered(fan.waves)) {
      throw StructuralError("solve_system_lagrange: boundary fan has unordered speeds");
    }
    return fan;
  }

  // zeta-shock composition: left group at zl below sigma, right group at zr
  // above sigma, intermediate states tied by the jump relation
  // F(u2,zr) - F(u1,zl) = sigma (u2 - u1).
  const double sigma =
      (eval_adsorption(zr, m).a - eval_adsorption(zl, m).a) / (zr - zl);
  const double t_r = tangent_point(zr, sigma, m);
  const double t_l = tangent_point(zl, sigma, m);
  const double umax_l = U_max(zl, m);

  std::vector<LagrangeCandidate> cands;
  auto push_unique = [&cands](double u1, double u2) {
    for (const auto& c : cands) {
      if (std::fabs(c.u1 - u1) < 1e-10 && std::fabs(c.u2 - u2) < 1e-10) return;
    }
    cands.push_back({u1, u2});
  };
  // Enumerate sonic-attached and direct intermediate states on each side;
  // the jump relation then pins the opposite side.
  for (double u2 : {t_r, right.U}) {
    const double rhs = kappa(u2, zr, sigma, m);
    for (double u1 : kappa_roots(rhs, zl, sigma, m)) push_unique(u1, u2);
  }
  {
    std::vector<double> u1cands = {t_l};
    if (!left.dry) u1cands.push_back(left.U);
    for (double u1 : u1cands) {
      const double rhs = kappa(u1, zl, sigma, m);
      auto g = [&](double U) { return kappa(U, zr, sigma, m) - rhs; };
      const double tr2 = tangent_point(zr, sigma, m);
      if (g(tr2) >= 0.0) {
        if (g(1.0) < 0.0) push_unique(u1, bisect(g, 1.0, tr2, 1e-13));
        double hi = std::max(2.0 * tr2, 4.0);
        int guard = 0;
        while (g(hi) > 0.0 && guard++ < 60) hi *= 2.0;
        if (g(hi) <= 0.0) push_unique(u1, bisect(g, tr2, hi, 1e-13));
      }
    }
  }

  for (const LagrangeCandidate& cand : cands) {
    if (cand.u1 < 1.0 || cand.u2 < 1.0) continue;
    if (forbidden_crossing(cand.u1, zl, cand.u2, zr, sigma, m)) continue;

    std::vector<Wave> assembled;
    if (left.dry) {
      const double fu1 = eval_F(cand.u1, zl, m).F_U;
      Wave bound;
      bound.kind = WaveKind::Shock;
      bound.left = FanState{0.0, zl, true};
      bound.speed_lo = bound.speed_hi = 0.0;
      if (fu1 <= 1e-10) {
        bound.right = FanState{cand.u1, zl, false};
        assembled.push_back(bound);
      } else if (cand.u1 < umax_l && fu1 <= sigma + 1e-10) {
        bound.right = FanState{umax_l, zl, false};
        assembled.push_back(bound);
        auto rest = u_fan(umax_l, cand.u1, zl, m);
        assembled.insert(assembled.end(), rest.begin(), rest.end());
      } else {
        continue;
      }
    } else {
      auto group = u_fan(left.U, cand.u1, zl, m);
      bool ok = true;
      for (const Wave& w : group) ok = ok && w.speed_hi <= sigma + kSpeedTol;
      if (!ok) continue;
      assembled = std::move(group);
    }

    Wave jump;
    jump.kind = WaveKind::ZetaJump;
    jump.left = FanState{cand.u1, zl, false};
    jump.right = FanState{cand.u2, zr, false};
    jump.speed_lo = jump.speed_hi = sigma;
    assembled.push_back(jump);

    auto group_r = u_fan(cand.u2, right.U, zr, m);
    bool ok = true;
    for (const Wave& w : group_r) ok = ok && w.speed_lo >= sigma - kSpeedTol;
    if (!ok) continue;
    assembled.insert(assembled.end(), group_r.begin(), group_r.end());

    if (!speeds_ordered(assembled)) continue;
    fan.waves = std::move(assembled);
    return fan;
  }
  throw StructuralError("solve_system_lagrange: no admissible intermediate states; " +
                        kappa_diagnostic(kappa(right.U, zr, sigma, m), zl, sigma, m));
}

namespace {

FanState map_state_to_original(const FanState& st, const ModelConfig& m) {
  if (st.dry) return FanState{0.0, st.b, true};
  const double s = saturation_from_U(st.a, st.b, m);
  return FanState{s, st.b, false};
}

}  // namespace

WaveFan to_original(const WaveFan& fan, const ModelConfig& m) {
  if (fan.coords != FanCoords::Lagrange) {
    throw InputError("to_original: fan is already in original coordinates");
  }
  if (fan.far_right.dry) {
    throw StructuralError("to_original: DRY far-right maps to a dry injection state");
  }
  WaveFan out;
  out.coords = FanCoords::Original;
  out.far_left = map_state_to_original(fan.far_right, m);
  out.far_right = map_state_to_original(fan.far_left, m);

  std::vector<Wave> mapped;
  for (const Wave& w : fan.waves) {
    Wave o;
    o.left = map_state_to_original(w.right, m);   // sides swap under the map
    o.right = map_state_to_original(w.left, m);
    if (w.kind == WaveKind::Rarefaction) {
      o.kind = WaveKind::Rarefaction;
      o.speed_lo = eval_flux(o.left.a, o.left.b, m).f_s;
      o.speed_hi = eval_flux(o.right.a, o.right.b, m).f_s;
    } else {
      o.kind = WaveKind::Shock;
      const double fm = eval_flux(o.left.a, o.left.b, m).f;
      const double fp = o.right.dry ? 0.0 : eval_flux(o.right.a, o.right.b, m).f;
      const double ds = (o.right.dry ? 0.0 : o.right.a) - o.left.a;
      if (std::fabs(ds) < 1e-14) {
        throw StructuralError("to_original: degenerate shock with no saturation jump");
      }
      o.speed_lo = o.speed_hi = (fp - fm) / ds;
      if (o.right.dry) {
        out.zero_flow = ZeroFlowRegion{o.speed_lo, 0.0, o.right.b};
      }
    }
    mapped.push_back(o);
  }
  std::reverse(mapped.begin(), mapped.end());
  out.waves = std::move(mapped);
  if (!speeds_ordered(out.waves)) {
    throw StructuralError("to_original: mapped fan has unordered speeds");
  }
  return out;
}

SC fan_eval(const WaveFan& fan, double xi, const ModelConfig& m) {
  if (fan.coords != FanCoords::Original) {
    throw InputError("fan_eval: expects an original-coordinate fan");
  }
  FanState cur = fan.far_left;
  for (const Wave& w : fan.waves) {
    if (xi < w.speed_lo) break;
    if (w.kind == WaveKind::Rarefaction && xi <= w.speed_hi) {
      const double c = w.left.b;
      const double s_lo = std::min(w.left.a, w.right.a);
      const double s_hi = std::max(w.left.a, w.right.a);
      auto defect = [&](double s) { return eval_flux(s, c, m).f_s - xi; };
      const double d_lo = defect(s_lo);
      const double d_hi = defect(s_hi);
      if ((d_lo < 0.0) == (d_hi < 0.0)) {
        // xi grazes an edge of the fan; snap to the nearer edge state.
        const double s = std::fabs(d_lo) <= std::fabs(d_hi) ? s_lo : s_hi;
        return SC{s, c};
      }
      const double s = bisect(defect, s_lo, s_hi, 1e-13);
      return SC{s, c};
    }
    cur = w.right;
  }
  if (cur.dry) return SC{0.0, cur.b};
  return SC{cur.a, cur.b};
}

WaveFan solve_system_original(const SC& left, const SC& right, const ModelConfig& m) {
  if (std::fabs(left.c - right.c) <= 1e-12) {
    return solve_bl(left.s, right.s, left.c, m);
  }
  if (left.c < right.c) {
    throw StructuralError(
        "solve_system_original: rising concentration data needs the coupled fan this solver "
        "does not construct");
  }
  const double h = d_coeffs(left.c, right.c, m).first;

  auto assemble = [&](double s1, double v) -> std::optional<WaveFan> {
    // Partner saturations ahead of the concentration shock.
    const NullclineType nt = classify_nullclines(left.c, right.c, v, m);
    for (double s2 : nt.roots_plus) {
      WaveFan fan;
      fan.coords = FanCoords::Original;
      fan.far_left = {left.s, left.c, false};
      fan.far_right = {right.s, right.c, right.s == 0.0};
      WaveFan lf = solve_bl(left.s, s1, left.c, m);
      WaveFan rf = solve_bl(s2, right.s, right.c, m);
      fan.waves = lf.waves;
      Wave cw;
      cw.kind = WaveKind::Shock;
      cw.left = FanState{s1, left.c, false};
      cw.right = FanState{s2, right.c, false};
      cw.speed_lo = cw.speed_hi = v;
      fan.waves.push_back(cw);
      fan.waves.insert(fan.waves.end(), rf.waves.begin(), rf.waves.end());
      if (!speeds_ordered(fan.waves)) continue;
      ShockData sh{s1, s2, left.c, right.c, v};
      Admissibility adm = admissible(sh, m);
      if (!adm.admissible) continue;
      fan.zero_flow = rf.zero_flow;
      return fan;
    }
    return std::nullopt;
  };

  // Direct attachment: the concentration shock leaves the left state as is.
  {
    const double v = eval_flux(left.s, left.c, m).f / (left.s + h);
    if (v > 0.0 && eval_flux(left.s, left.c, m).f_s <= v + kSpeedTol) {
      if (auto fan = assemble(left.s, v)) return *fan;
    }
  }
  // Sonic attachment: the slow group ends at the tangency of the chord line.
  {
    const double sI = inflection_s(left.c, m);
    auto W = [&](double s) {
      const FluxEval fe = eval_flux(s, left.c, m);
      return fe.f - fe.f_s * (s + h);
    };
    auto br = scan_first_sign_change(W, sI, 1.0 - 1e-12, 1024);
    if (br) {
      const double s1 = (br->lo == br->hi) ? br->lo : bisect(W, br->lo, br->hi, 1e-13);
      const double v = eval_flux(s1, left.c, m).f_s;
      if (auto fan = assemble(s1, v)) return *fan;
    }
  }
  throw StructuralError("solve_system_original: no admissible composition found");
}

std::vector<std::array<double, 3>> fan_profile(const WaveFan& fan, const ModelConfig& m,
                                               double xi_lo, double xi_hi, int n_constant,
                                               int samples_per_rarefaction) {
  if (fan.coords != FanCoords::Original) {
    throw InputError("fan_profile: expects an original-coordinate fan");
  }
  std::vector<double> xis;
  auto add_range = [&](double a, double b, int k) {
    a = std::max(a, xi_lo);
    b = std::min(b, xi_hi);
    if (!(b > a)) return;
    for (int i = 0; i <= k; ++i) xis.push_back(a + (b - a) * static_cast<double>(i) / k);
  };
  double prev = xi_lo;
  for (const Wave& w : fan.waves) {
    add_range(prev, w.speed_lo, n_constant);
    if (w.kind == WaveKind::Rarefaction) {
      add_range(w.speed_lo, std::min(w.speed_hi, xi_hi), samples_per_rarefaction - 1);
    }
    xis.push_back(std::clamp(w.speed_hi + 1e-12, xi_lo, xi_hi));
    prev = w.speed_hi;
  }
  add_range(prev, xi_hi, n_constant);
  std::sort(xis.begin(), xis.end());
  xis.erase(std::unique(xis.begin(), xis.end()), xis.end());
  std::vector<std::array<double, 3>> rows;
  rows.reserve(xis.size());
  for (double xi : xis) {
    const SC sc = fan_eval(fan, xi, m);
    rows.push_back({xi, sc.s, sc.c});
  }
  return rows;
}

PotentialField potential(const GridField& field, const ModelConfig& m) {
  if (field.frames.size() < 2) throw InputError("potential: need at least two frames");
  PotentialField out;
  out.x0 = field.x0;
  out.dx = field.dx;
  const int nx = field.nx();
  const size_t nt = field.frames.size();
  out.times.resize(nt);
  out.phi.assign(nt, std::vector<double>(static_cast<size_t>(nx), 0.0));

  // Base edge: phi(x, t0) = -int s dx by the trapezoid rule over cell centers.
  const Frame& base = field.frames.front();
  out.phi0.resize(static_cast<size_t>(nx), 0.0);
  for (int i = 1; i < nx; ++i) {
    out.phi0[static_cast<size_t>(i)] =
        out.phi0[static_cast<size_t>(i - 1)] -
        0.5 * (base.s[static_cast<size_t>(i - 1)] + base.s[static_cast<size_t>(i)]) * field.dx;
  }
  out.phi[0] = out.phi0;
  out.times[0] = base.t;

  for (size_t k = 1; k < nt; ++k) {
    const Frame& fa = field.frames[k - 1];
    const Frame& fb = field.frames[k];
    const double dt = fb.t - fa.t;
    out.times[k] = fb.t;
    for (int i = 0; i < nx; ++i) {
      const size_t ii = static_cast<size_t>(i);
      const double flux_a = eval_flux(fa.s[ii], fa.c[ii], m).f;
      const double flux_b = eval_flux(fb.s[ii], fb.c[ii], m).f;
      out.phi[k][ii] = out.phi[k - 1][ii] + 0.5 * (flux_a + flux_b) * dt;
    }
  }
  return out;
}

}  // namespace chemflood
