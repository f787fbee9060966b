#include "chemflood/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace chemflood {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw InputError("config: unknown key at " + path + "/" + it.key());
    }
  }
}

double need_number(const json& obj, const std::string& key, const std::string& path,
                   double fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw InputError("config: missing key " + path + "/" + key);
    return fallback;
  }
  if (!obj[key].is_number()) throw InputError("config: " + path + "/" + key + " must be a number");
  return obj[key].get<double>();
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  if (!doc.is_object()) throw InputError("config: document must be an object");
  reject_unknown_keys(doc, {"schema", "model", "viscous", "output_dir", "seed"}, "");

  if (doc.contains("schema")) {
    if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != 1) {
      throw InputError("config: /schema must be the integer 1");
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      throw InputError("config: /seed must be an integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw InputError("config: /output_dir must be a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }

  FluxParams flux;
  AdsorptionParams ads;
  if (doc.contains("model")) {
    const json& mj = doc["model"];
    reject_unknown_keys(mj, {"flux", "adsorption"}, "/model");
    if (mj.contains("flux")) {
      const json& fj = mj["flux"];
      reject_unknown_keys(fj, {"type", "M0", "kc"}, "/model/flux");
      if (fj.contains("type") && fj["type"].get<std::string>() != "corey") {
        throw InputError("config: /model/flux/type must be \"corey\"");
      }
      flux.M0 = need_number(fj, "M0", "/model/flux", flux.M0);
      flux.kc = need_number(fj, "kc", "/model/flux", flux.kc);
    }
    if (mj.contains("adsorption")) {
      const json& aj = mj["adsorption"];
      reject_unknown_keys(aj, {"type", "A", "B"}, "/model/adsorption");
      if (aj.contains("type") && aj["type"].get<std::string>() != "langmuir") {
        throw InputError("config: /model/adsorption/type must be \"langmuir\"");
      }
      ads.A = need_number(aj, "A", "/model/adsorption", ads.A);
      ads.B = need_number(aj, "B", "/model/adsorption", ads.B);
    }
  }
  cfg.model = make_model(flux, ads);

  if (doc.contains("viscous")) {
    const json& vj = doc["viscous"];
    reject_unknown_keys(vj,
                        {"epsilon", "L", "N", "cfl", "T", "left", "right", "frame_count"},
                        "/viscous");
    ViscousConfig vc;
    vc.epsilon = need_number(vj, "epsilon", "/viscous", vc.epsilon);
    vc.L = need_number(vj, "L", "/viscous", vc.L);
    vc.N = static_cast<int>(need_number(vj, "N", "/viscous", vc.N));
    vc.cfl = need_number(vj, "cfl", "/viscous", vc.cfl);
    vc.T = need_number(vj, "T", "/viscous", vc.T);
    vc.frame_count = static_cast<int>(need_number(vj, "frame_count", "/viscous", vc.frame_count));
    auto parse_state = [&](const char* key, SC fallback) {
      if (!vj.contains(key)) return fallback;
      const json& sj = vj[key];
      reject_unknown_keys(sj, {"s", "c"}, std::string("/viscous/") + key);
      return SC{need_number(sj, "s", std::string("/viscous/") + key, fallback.s, true),
                need_number(sj, "c", std::string("/viscous/") + key, fallback.c, true)};
    };
    vc.left = parse_state("left", vc.left);
    vc.right = parse_state("right", vc.right);
    cfg.viscous = vc;
    cfg.has_viscous = true;
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::json model_to_json(const ModelConfig& m) {
  return nlohmann::json{
      {"flux", {{"type", "corey"}, {"M0", m.flux.M0}, {"kc", m.flux.kc}}},
      {"adsorption", {{"type", "langmuir"}, {"A", m.adsorption.A}, {"B", m.adsorption.B}}}};
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace chemflood
