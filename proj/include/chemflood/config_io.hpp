#ifndef CHEMFLOOD_CONFIG_IO_HPP
#define CHEMFLOOD_CONFIG_IO_HPP

#include <cstdint>
#include <string>

#include "chemflood/model.hpp"
#include "chemflood/viscous.hpp"

#include "json.hpp"

namespace chemflood {

/// Top-level run configuration. Unknown keys anywhere in the document are
/// rejected so that typos fail loudly instead of silently using defaults.
struct RunConfig {
  int schema = 1;
  ModelConfig model;
  ViscousConfig viscous;
  bool has_viscous = false;
  std::string output_dir = ".";
  std::uint64_t seed = kDefaultSeed;
};

/// Parses and validates a config document. Throws InputError with a JSON
/// pointer-style path on schema violations.
RunConfig parse_config(const nlohmann::json& doc);

RunConfig load_config_file(const std::string& path);

nlohmann::json model_to_json(const ModelConfig& m);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_g17(double v);

}  // namespace chemflood

#endif  // CHEMFLOOD_CONFIG_IO_HPP
