#ifndef CHEMFLOOD_TW_ODE_HPP
#define CHEMFLOOD_TW_ODE_HPP

#include <array>
#include <string>
#include <vector>

#include "chemflood/model.hpp"
#include "chemflood/shock.hpp"

namespace chemflood {

/// Parameters of the travelling-wave system
///   s' = f(s,c) - v (s + d1),   c' = v (d1 c - d2 - a(c)).
struct TWParams {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  ModelConfig model;

  /// Derives (v,d1,d2) from a Rankine-Hugoniot-consistent shock. For an
  /// s-shock the coefficients are chosen so that the c-component is
  /// identically zero and the s-equation reduces to the chord defect.
  static TWParams from_shock(const ShockData& sh, const ModelConfig& m);
};

struct FieldVal {
  double ds;
  double dc;
};

FieldVal vector_field(double s, double c, const TWParams& p);

enum class Termination { ConvergedToTarget, LeftDomain, Stalled, MaxSteps };

struct Trajectory {
  std::vector<std::array<double, 3>> samples;  // (xi, s, c)
  Termination termination = Termination::MaxSteps;
  double min_target_dist = 0.0;
};

struct IntegrateOptions {
  double abs_tol = 1e-10;
  double max_xi = 1e4;
  long max_steps = 1000000;
  double target_radius = 1e-4;
  double max_h = 0.2;    // keeps h |J| inside the explicit stability region
  bool reverse = false;  // integrate the negated field (time-reversed orbit)
  int store_every = 8;   // sample thinning for emitted trajectories
};

/// Adaptive embedded Runge-Kutta integration of the travelling-wave field
/// from (s0,c0) toward the target, clamped to the unit square.
Trajectory integrate_orbit(const TWParams& p, double s0, double c0, double target_s,
                           double target_c, const IntegrateOptions& opt = {});

enum class Connection { Yes, No, Marginal };

struct ConnectionResult {
  Connection verdict = Connection::No;
  double min_dist = 1e300;
  std::string note;
};

/// Numerical oracle for c-shock admissibility: does the travelling-wave system
/// carry an orbit from (s-,c-) to (s+,c+)? Shoots along unstable eigenvectors
/// of the Jacobian at the source, and backward along stable eigenvectors of
/// the target when the target is a saddle.
ConnectionResult connection_exists(const ShockData& sh, const ModelConfig& m);

struct PortraitCurve {
  std::string kind;  // nullcline_s | nullcline_c | critical | trajectory
  int idx = 0;
  std::vector<std::array<double, 2>> pts;  // (s, c)
};

/// Nullclines (marching squares on an n-by-n grid), critical points, and a
/// bundle of 12 representative trajectories in the strip
/// { s in (0,1), c between c+ and c- }.
std::vector<PortraitCurve> phase_portrait(double c_minus, double c_plus, double v,
                                          const ModelConfig& m, int n = 129);

}  // namespace chemflood

#endif  // CHEMFLOOD_TW_ODE_HPP
