#include "chemflood/verify.hpp"

#include <algorithm>
#include <cmath>

namespace chemflood {

std::pair<double, double> contour_residual(const FieldSampler& sampler, const Rect& rect, int n,
                                           const ModelConfig& m) {
  if (!(rect.x1 > rect.x0 && rect.t1 > rect.t0) || n < 2) {
    throw InputError("contour_residual: degenerate rectangle or too few points");
  }
  const double dx = (rect.x1 - rect.x0) / n;
  const double dt = (rect.t1 - rect.t0) / n;
  double r1 = 0.0;  // oint f dt - s dx
  double r2 = 0.0;  // oint c (s dx - f dt) + a(c) dx
  // Counterclockwise: bottom (dx>0), right (dt>0), top (dx<0), left (dt<0).
  for (int i = 0; i < n; ++i) {
    const double xm = rect.x0 + (i + 0.5) * dx;
    const SC bot = sampler(xm, rect.t0);
    const SC top = sampler(xm, rect.t1);
    // dt = 0 on the horizontal edges, so only the dx terms survive. The top
    // edge is traversed right-to-left.
    r1 += -bot.s * dx + top.s * dx;
    r2 += bot.c * (bot.s * dx) + eval_adsorption(bot.c, m).a * dx;
    r2 += top.c * (top.s * (-dx)) + eval_adsorption(top.c, m).a * (-dx);
  }
  for (int j = 0; j < n; ++j) {
    const double tm = rect.t0 + (j + 0.5) * dt;
    const SC rgt = sampler(rect.x1, tm);
    const SC lft = sampler(rect.x0, tm);
    const double f_r = eval_flux(rgt.s, rgt.c, m).f;
    const double f_l = eval_flux(lft.s, lft.c, m).f;
    r1 += f_r * dt - f_l * dt;
    r2 += rgt.c * (-f_r * dt) + lft.c * (f_l * dt);
  }
  return {std::fabs(r1), std::fabs(r2)};
}

FieldSampler sampler_from_grid(const GridField& field) {
  if (field.frames.size() < 2) throw InputError("sampler_from_grid: need at least two frames");
  return [field](double x, double t) -> SC {
    const auto& frames = field.frames;
    size_t hi = 1;
    while (hi + 1 < frames.size() && frames[hi].t < t) ++hi;
    const Frame& fa = frames[hi - 1];
    const Frame& fb = frames[hi];
    const double span = std::max(fb.t - fa.t, 1e-300);
    const double w = std::clamp((t - fa.t) / span, 0.0, 1.0);
    const int nx = static_cast<int>(fa.s.size());
    const double rel = (x - field.x0) / field.dx - 0.5;
    const int i0 = std::clamp(static_cast<int>(std::floor(rel)), 0, nx - 1);
    const int i1 = std::min(i0 + 1, nx - 1);
    const double u = std::clamp(rel - i0, 0.0, 1.0);
    auto lerp2 = [&](const std::vector<double>& va, const std::vector<double>& vb) {
      const double at = va[static_cast<size_t>(i0)] * (1.0 - u) + va[static_cast<size_t>(i1)] * u;
      const double bt = vb[static_cast<size_t>(i0)] * (1.0 - u) + vb[static_cast<size_t>(i1)] * u;
      return at * (1.0 - w) + bt * w;
    };
    return SC{lerp2(fa.s, fb.s), lerp2(fa.c, fb.c)};
  };
}

FieldSampler sampler_from_fan(const WaveFan& fan, const ModelConfig& m) {
  if (fan.coords != FanCoords::Original) {
    throw InputError("sampler_from_fan: expects an original-coordinate fan");
  }
  return [fan, &m](double x, double t) -> SC {
    if (t <= 0.0) throw InputError("sampler_from_fan: t must be positive");
    return fan_eval(fan, x / t, m);
  };
}

T0Result t0_extract(const GridField& field, double x_lo, double threshold) {
  if (field.frames.size() < 2) throw InputError("t0_extract: need at least two frames");
  T0Result out;
  const int nx = field.nx();
  for (int i = 0; i < nx; ++i) {
    const double x = field.x_center(i);
    if (x <= x_lo) continue;
    // Last frame time with s below the dry threshold.
    double t0 = -1.0;
    bool ever_wet = false;
    for (const Frame& fr : field.frames) {
      if (fr.s[static_cast<size_t>(i)] < threshold) {
        t0 = fr.t;
      } else {
        ever_wet = true;
      }
    }
    if (!ever_wet && t0 == field.frames.back().t) {
      out.all_finite = false;
      ++out.infinite_columns;
      continue;
    }
    if (t0 < 0.0) continue;  // column wet from the start: not part of the dry region
    out.x.push_back(x);
    out.t0.push_back(t0);
  }
  for (size_t k = 1; k < out.t0.size(); ++k) {
    out.max_jump = std::max(out.max_jump, std::fabs(out.t0[k] - out.t0[k - 1]));
  }
  return out;
}

double omega0_concentration_check(const GridField& field, const T0Result& t0,
                                  int buffer_frames) {
  if (t0.x.empty()) return 0.0;
  const Frame& first = field.frames.front();
  double drift = 0.0;
  for (size_t k = 0; k < t0.x.size(); ++k) {
    const int i = static_cast<int>(std::lround((t0.x[k] - field.x0) / field.dx - 0.5));
    if (i < 0 || i >= field.nx()) continue;
    // Stay `buffer_frames` frames below the extracted boundary.
    int last_ok = -1;
    for (size_t fidx = 0; fidx < field.frames.size(); ++fidx) {
      if (field.frames[fidx].t <= t0.t0[k]) last_ok = static_cast<int>(fidx);
    }
    const int stop = last_ok - buffer_frames;
    for (int fidx = 0; fidx <= stop; ++fidx) {
      const double c_now = field.frames[static_cast<size_t>(fidx)].c[static_cast<size_t>(i)];
      const double c_init = first.c[static_cast<size_t>(i)];
      drift = std::max(drift, std::fabs(c_now - c_init));
    }
  }
  return drift;
}

}  // namespace chemflood
