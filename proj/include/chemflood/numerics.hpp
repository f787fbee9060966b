#ifndef CHEMFLOOD_NUMERICS_HPP
#define CHEMFLOOD_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemflood {

// Error categories shared across modules.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ModelShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WrongShockKindError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeasurementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Bisect a bracketed sign change down to absolute width `tol`.
/// Requires fn(lo) and fn(hi) of opposite (or zero) sign.
inline double bisect(const std::function<double(double)>& fn, double lo, double hi,
                     double tol = 1e-12, int max_iter = 200) {
  double flo = fn(lo);
  double fhi = fn(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw SolverError("bisect: endpoints do not bracket a sign change");
  }
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

/// Scan [lo,hi] in `cells` uniform cells and return every cell with a sign change.
inline std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& fn,
                                              double lo, double hi, int cells = 1024) {
  std::vector<Bracket> out;
  double x0 = lo;
  double f0 = fn(x0);
  for (int i = 1; i <= cells; ++i) {
    const double x1 = lo + (hi - lo) * static_cast<double>(i) / cells;
    const double f1 = fn(x1);
    if (f0 == 0.0) {
      out.push_back({x0, x0});
    } else if (f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
      out.push_back({x0, x1});
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) out.push_back({hi, hi});
  return out;
}

/// First sign-change bracket on [lo,hi], if any.
inline std::optional<Bracket> scan_first_sign_change(const std::function<double(double)>& fn,
                                                     double lo, double hi, int cells = 1024) {
  auto all = scan_sign_changes(fn, lo, hi, cells);
  if (all.empty()) return std::nullopt;
  return all.front();
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) {
    v[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return v;
}

// Deterministic 64-bit generator (splitmix64). Used instead of <random>
// distributions so that seeded sweeps are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t kDefaultSeed = 0xC0FFEEULL;

}  // namespace chemflood

#endif  // CHEMFLOOD_NUMERICS_HPP
