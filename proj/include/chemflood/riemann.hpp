#ifndef CHEMFLOOD_RIEMANN_HPP
#define CHEMFLOOD_RIEMANN_HPP

#include <functional>
#include <optional>
#include <vector>

#include "chemflood/grid.hpp"
#include "chemflood/lagrange.hpp"
#include "chemflood/shock.hpp"

namespace chemflood {

/// One segment of a flux envelope on [lo,hi]: either the graph itself or a
/// straight chord/tangent portion.
struct EnvelopePiece {
  double lo = 0.0;
  double hi = 0.0;
  bool straight = false;
  double slope = 0.0;  // only meaningful for straight pieces
};

struct Envelope {
  std::vector<double> breakpoints;  // ascending, including both ends
  std::vector<EnvelopePiece> pieces;
};

/// Convex envelope of a scalar flux on [lo,hi]: the largest convex minorant
/// (lower = true) or the smallest concave majorant (lower = false).
/// Structure is detected on a sampled hull and tangency breakpoints are then
/// refined to 1e-12 by bisection of the tangency condition.
Envelope envelope_of(const std::function<double(double)>& flux,
                     const std::function<double(double)>& flux_prime, double lo, double hi,
                     bool lower, int grid_n = 4096);

/// Envelope of the fractional flow f(.,c) on [s_lo, s_hi].
Envelope convex_envelope(double c, double s_lo, double s_hi, const ModelConfig& m, bool lower,
                         int grid_n = 4096);

enum class WaveKind { Shock, Rarefaction, ZetaJump };
enum class FanCoords { Original, Lagrange };

/// State carried by a wave fan: (s,c) in original coordinates or (U,zeta) in
/// Lagrange coordinates; `dry` marks the zero-flow state.
struct FanState {
  double a = 0.0;
  double b = 0.0;
  bool dry = false;
};

struct Wave {
  WaveKind kind = WaveKind::Shock;
  FanState left;
  FanState right;
  double speed_lo = 0.0;
  double speed_hi = 0.0;  // == speed_lo for shocks
};

/// Zero-flow descriptor for original-coordinate fans whose right state is dry:
/// the region { x > x0 + front_speed * t } where s = 0 and c stays at c_ahead.
struct ZeroFlowRegion {
  double front_speed = 0.0;
  double x0 = 0.0;
  double c_ahead = 0.0;
};

struct WaveFan {
  FanCoords coords = FanCoords::Original;
  FanState far_left;
  FanState far_right;
  std::vector<Wave> waves;  // ordered by nondecreasing speed
  std::optional<ZeroFlowRegion> zero_flow;
};

/// Scalar Buckley-Leverett fan at fixed c from the appropriate envelope.
/// Left/right refer to x < 0 / x > 0 initial data. Equal states: empty fan.
WaveFan solve_bl(double s_left, double s_right, double c, const ModelConfig& m);

/// Scalar fan of the concave adsorption equation in Lagrange coordinates:
/// shock (speed [a]/[zeta] > 0) when zeta_left < zeta_right, rarefaction
/// spanning the isotherm slopes otherwise.
WaveFan solve_zeta(double zeta_left, double zeta_right, const ModelConfig& m);

/// Two-state Riemann solver for the split system in Lagrange coordinates.
/// `left` is the state on the small-potential side (ahead of the flow: it
/// maps to the original right/ahead state); a DRY left represents the
/// zero-flow boundary and produces the stationary boundary shock.
/// Supports equal-zeta data and zeta_left < zeta_right (zeta-shock)
/// compositions; zeta_left > zeta_right requires a coupled fan through a
/// zeta-rarefaction and is reported as a StructuralError.
WaveFan solve_system_lagrange(const LagrangeState& left, const LagrangeState& right,
                              const ModelConfig& m);

/// Maps a Lagrange fan back to original coordinates: states through the
/// inverse transform, shocks through the shock map, a DRY left side into the
/// zero-flow region bounded by the front shock.
WaveFan to_original(const WaveFan& fan, const ModelConfig& m);

/// Evaluates an original-coordinate fan at similarity speed xi = x/t.
SC fan_eval(const WaveFan& fan, double xi, const ModelConfig& m);

/// Direct construction of the two-state original-coordinate solution:
/// scalar fan for equal concentrations, otherwise slow-group BL waves at
/// c_left, the concentration shock, and fast-group BL waves at c_right.
WaveFan solve_system_original(const SC& left, const SC& right, const ModelConfig& m);

/// Samples rarefactions at `samples_per_rarefaction` equispaced speeds and
/// returns profile rows (xi, s, c) covering [xi_lo, xi_hi].
std::vector<std::array<double, 3>> fan_profile(const WaveFan& fan, const ModelConfig& m,
                                               double xi_lo, double xi_hi, int n_constant = 16,
                                               int samples_per_rarefaction = 129);

struct PotentialField {
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> phi;  // phi[frame][node]
  std::vector<double> phi0;              // base-edge potential -int s dx
};

/// Path-integrates d(phi) = f dt - s dx along grid edges from the origin:
/// first along the t = t_first edge, then up each column.
PotentialField potential(const GridField& field, const ModelConfig& m);

}  // namespace chemflood

#endif  // CHEMFLOOD_RIEMANN_HPP
