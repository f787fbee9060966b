#include <cstring>
#include <iostream>

#include "chemflood/acceptance.hpp"

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
  }
  const chemflood::ModelConfig model = chemflood::make_model();
  const auto results = chemflood::run_acceptance(model, chemflood::kDefaultSeed, quick);
  const int failures = chemflood::report_acceptance(results, std::cout);
  if (failures != 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
