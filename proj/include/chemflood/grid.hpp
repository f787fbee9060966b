#ifndef CHEMFLOOD_GRID_HPP
#define CHEMFLOOD_GRID_HPP

#include <vector>

#include "chemflood/numerics.hpp"

namespace chemflood {

/// One output frame of a space-time sampled (s,c) field.
struct Frame {
  double t = 0.0;
  std::vector<double> s;
  std::vector<double> c;
};

/// Uniform-grid sampled field: cell centers x_i = x0 + (i+1/2) dx.
struct GridField {
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<Frame> frames;
  long clip_events = 0;

  int nx() const { return frames.empty() ? 0 : static_cast<int>(frames.front().s.size()); }
  double x_center(int i) const { return x0 + (i + 0.5) * dx; }
};

}  // namespace chemflood

#endif  // CHEMFLOOD_GRID_HPP
