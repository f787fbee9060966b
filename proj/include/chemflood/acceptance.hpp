#ifndef CHEMFLOOD_ACCEPTANCE_HPP
#define CHEMFLOOD_ACCEPTANCE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chemflood/model.hpp"

namespace chemflood {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full acceptance battery on the given model. `quick` shrinks the
/// dissipative-solver grids (useful for smoke runs); the reference battery
/// runs with quick = false.
std::vector<CriterionResult> run_acceptance(const ModelConfig& m,
                                            std::uint64_t seed = kDefaultSeed,
                                            bool quick = false);

/// Prints one pass/fail line per criterion; returns the number of failures.
int report_acceptance(const std::vector<CriterionResult>& results, std::ostream& os);

}  // namespace chemflood

#endif  // CHEMFLOOD_ACCEPTANCE_HPP
