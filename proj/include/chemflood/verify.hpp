#ifndef CHEMFLOOD_VERIFY_HPP
#define CHEMFLOOD_VERIFY_HPP

#include <functional>
#include <utility>
#include <vector>

#include "chemflood/grid.hpp"
#include "chemflood/riemann.hpp"

namespace chemflood {

using FieldSampler = std::function<SC(double x, double t)>;

struct Rect {
  double x0, x1, t0, t1;
};

/// Midpoint-rule circulation of the two conserved forms around a rectangle:
///   r1 = | oint f dt - s dx |,
///   r2 = | oint c (s dx - f dt) + oint a(c) dx |,
/// with n sample points per edge. Both vanish on exact solutions.
std::pair<double, double> contour_residual(const FieldSampler& sampler, const Rect& rect, int n,
                                           const ModelConfig& m);

/// Sampler backed by a gridded run: piecewise-linear in x between cell
/// centers, nearest-frame-interpolated linearly in t.
FieldSampler sampler_from_grid(const GridField& field);

/// Sampler backed by a self-similar fan: state(x/t).
FieldSampler sampler_from_fan(const WaveFan& fan, const ModelConfig& m);

struct T0Result {
  std::vector<double> x;
  std::vector<double> t0;
  bool all_finite = true;     // every column left the dry state before the run end
  int infinite_columns = 0;   // columns still dry at the final frame
  double max_jump = 0.0;      // largest |t0(x_{i+1}) - t0(x_i)|
};

/// Zero-flow boundary: per column right of x_lo, the last frame time at which
/// s stays below `threshold`. Columns that never wet are flagged.
T0Result t0_extract(const GridField& field, double x_lo, double threshold = 1e-6);

/// Max concentration drift inside the zero-flow region: sup over columns and
/// over frames earlier than t0(x) by `buffer_frames` of |c(x,t) - c(x,0)|.
double omega0_concentration_check(const GridField& field, const T0Result& t0,
                                  int buffer_frames = 5);

}  // namespace chemflood

#endif  // CHEMFLOOD_VERIFY_HPP
