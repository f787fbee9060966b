#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chemflood/acceptance.hpp"
#include "chemflood/config_io.hpp"
#include "chemflood/entropy.hpp"
#include "chemflood/riemann.hpp"
#include "chemflood/shock.hpp"
#include "chemflood/tw_ode.hpp"
#include "chemflood/verify.hpp"
#include "chemflood/viscous.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace chemflood;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdict = 2;

ModelConfig model_from_config(const std::string& path) {
  if (path.empty()) return make_model();
  return load_config_file(path).model;
}

json report_to_json(const ValidationReport& rep) {
  json issues = json::array();
  for (const ValidationIssue& is : rep.issues) {
    issues.push_back({{"check", is.check}, {"s", is.s}, {"c", is.c}, {"note", is.note}});
  }
  return json{{"passed", rep.passed}, {"degenerate_in_c", rep.degenerate_in_c}, {"issues", issues}};
}

SC parse_sc(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InputError("expected \"s,c\" pair: " + text);
  return SC{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

LagrangeState parse_lagrange_state(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InputError("expected \"U,zeta\" pair: " + text);
  const std::string u_part = text.substr(0, comma);
  const double zeta = std::stod(text.substr(comma + 1));
  if (u_part == "dry") return LagrangeState::dry_state(zeta);
  return LagrangeState::wet(std::stod(u_part), zeta);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file " + path);
  return out;
}

json wave_to_json(const Wave& w) {
  auto state = [](const FanState& st) {
    return st.dry ? json{{"dry", true}, {"b", st.b}} : json{{"a", st.a}, {"b", st.b}};
  };
  const char* kind = w.kind == WaveKind::Shock
                         ? "shock"
                         : (w.kind == WaveKind::Rarefaction ? "rarefaction" : "zeta-jump");
  return json{{"kind", kind},
              {"left", state(w.left)},
              {"right", state(w.right)},
              {"speed_lo", w.speed_lo},
              {"speed_hi", w.speed_hi}};
}

json fan_to_json(const WaveFan& fan) {
  json waves = json::array();
  for (const Wave& w : fan.waves) waves.push_back(wave_to_json(w));
  json out{{"coords", fan.coords == FanCoords::Original ? "original" : "lagrange"},
           {"waves", waves}};
  if (fan.zero_flow) {
    out["zero_flow"] = {{"front_speed", fan.zero_flow->front_speed},
                        {"x0", fan.zero_flow->x0},
                        {"c_ahead", fan.zero_flow->c_ahead}};
  }
  return out;
}

void write_frames(const GridField& field, const std::string& dir) {
  fs::create_directories(dir);
  int idx = 0;
  for (const Frame& fr : field.frames) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05d.csv", idx++);
    std::ofstream out(fs::path(dir) / name);
    out << "# t=" << format_g17(fr.t) << " dx=" << format_g17(field.dx)
        << " x0=" << format_g17(field.x0) << "\n";
    out << "x,s,c\n";
    for (size_t i = 0; i < fr.s.size(); ++i) {
      out << format_g17(field.x0 + (static_cast<double>(i) + 0.5) * field.dx) << ","
          << format_g17(fr.s[i]) << "," << format_g17(fr.c[i]) << "\n";
    }
  }
}

// std::stod refuses subnormal results (underflow sets ERANGE); the diffusive
// foot of a front legitimately decays into that range, so parse leniently.
double parse_double(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) throw InputError("expected a number, got: " + text);
  return v;
}

GridField read_frames(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().filename().string().rfind("frame_", 0) == 0 &&
        entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no frame_*.csv files in " + dir);
  GridField field;
  for (const fs::path& p : files) {
    std::ifstream in(p);
    if (!in) throw InputError("cannot read " + p.string());
    std::string line;
    std::getline(in, line);  // "# t=... dx=... x0=..."
    Frame fr;
    {
      const auto tpos = line.find("t=");
      const auto dxpos = line.find("dx=");
      const auto xpos = line.find("x0=");
      if (tpos == std::string::npos || dxpos == std::string::npos || xpos == std::string::npos) {
        throw InputError("frame header missing t/dx/x0 in " + p.string());
      }
      fr.t = parse_double(line.substr(tpos + 2));
      field.dx = parse_double(line.substr(dxpos + 3));
      field.x0 = parse_double(line.substr(xpos + 3));
    }
    std::getline(in, line);  // column header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      fr.s.push_back(parse_double(line.substr(c1 + 1, c2 - c1 - 1)));
      fr.c.push_back(parse_double(line.substr(c2 + 1)));
    }
    field.frames.push_back(std::move(fr));
  }
  return field;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chemflood: two-phase chemical-flood conservation-law toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // lets `--config` appear after the subcommand
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")->capture_default_str();

  // model validate
  auto* cmd_model = app.add_subcommand("model", "model inspection");
  auto* cmd_model_validate = cmd_model->add_subcommand("validate", "check structural assumptions");
  int validate_n = 128;
  std::string model_out;
  cmd_model_validate->add_option("--n", validate_n, "grid size");
  cmd_model_validate->add_option("--out", model_out, "write the report JSON here");

  // lagrange eval
  auto* cmd_lagr = app.add_subcommand("lagrange", "transformed flux evaluation");
  auto* cmd_lagr_eval = cmd_lagr->add_subcommand("eval", "tabulate F, F_U, F_UU");
  double le_zeta = 0.0, le_umin = 1.0, le_umax = 8.0;
  int le_n = 64;
  std::string le_out;
  cmd_lagr_eval->add_option("--zeta", le_zeta);
  cmd_lagr_eval->add_option("--u-min", le_umin);
  cmd_lagr_eval->add_option("--u-max", le_umax);
  cmd_lagr_eval->add_option("--n", le_n);
  cmd_lagr_eval->add_option("--out", le_out);

  // shock classify / portrait
  auto* cmd_shock = app.add_subcommand("shock", "shock admissibility");
  auto* cmd_classify = cmd_shock->add_subcommand("classify", "admissibility verdict");
  double sc_sm = 0.0, sc_sp = 0.0, sc_cm = 0.0, sc_cp = 0.0;
  std::optional<double> sc_v;
  std::string sc_expect, sc_out;
  cmd_classify->add_option("--s-minus", sc_sm)->required();
  cmd_classify->add_option("--s-plus", sc_sp)->required();
  cmd_classify->add_option("--c-minus", sc_cm)->required();
  cmd_classify->add_option("--c-plus", sc_cp)->required();
  cmd_classify->add_option("--v", sc_v, "shock velocity (recomputed when omitted)");
  cmd_classify->add_option("--expect", sc_expect, "admissible|inadmissible");
  cmd_classify->add_option("--out", sc_out);

  auto* cmd_portrait = cmd_shock->add_subcommand("portrait", "nullclines and trajectories");
  double pp_cm = 1.0, pp_cp = 0.0, pp_v = 0.83;
  int pp_n = 129;
  std::string pp_out;
  cmd_portrait->add_option("--c-minus", pp_cm)->required();
  cmd_portrait->add_option("--c-plus", pp_cp)->required();
  cmd_portrait->add_option("--v", pp_v)->required();
  cmd_portrait->add_option("--n", pp_n);
  cmd_portrait->add_option("--out", pp_out);

  // entropy check
  auto* cmd_entropy = app.add_subcommand("entropy", "Kruzhkov residuals");
  auto* cmd_echeck = cmd_entropy->add_subcommand("check", "residual table for a shock record");
  std::string ec_shock, ec_out;
  cmd_echeck->add_option("--shock", ec_shock, "JSON shock record")->required();
  cmd_echeck->add_option("--out", ec_out);

  // riemann solve
  auto* cmd_riemann = app.add_subcommand("riemann", "two-state fans");
  auto* cmd_rsolve = cmd_riemann->add_subcommand("solve", "solve a Riemann problem");
  std::string rs_left, rs_right, rs_coords = "orig", rs_out, rs_profile;
  cmd_rsolve->add_option("--left", rs_left)->required();
  cmd_rsolve->add_option("--right", rs_right)->required();
  cmd_rsolve->add_option("--coords", rs_coords, "orig|lagr");
  cmd_rsolve->add_option("--out", rs_out, "fan JSON");
  cmd_rsolve->add_option("--profile", rs_profile, "profile CSV (xi,s,c)");

  // viscous run
  auto* cmd_visc = app.add_subcommand("viscous", "dissipative reference solver");
  auto* cmd_vrun = cmd_visc->add_subcommand("run", "time integration");
  std::string vr_frames;
  cmd_vrun->add_option("--frames", vr_frames, "output frame directory")->required();

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "structural checks on fields");
  auto* cmd_contours = cmd_verify->add_subcommand("contours", "circulation residuals");
  std::string vc_frames, vc_out;
  int vc_n = 256;
  cmd_contours->add_option("--frames", vc_frames)->required();
  cmd_contours->add_option("--n", vc_n);
  cmd_contours->add_option("--out", vc_out);
  auto* cmd_zeroflow = cmd_verify->add_subcommand("zeroflow", "dry-region boundary");
  std::string zf_frames, zf_out;
  double zf_threshold = 1e-6, zf_xlo = 0.0;
  cmd_zeroflow->add_option("--frames", zf_frames)->required();
  cmd_zeroflow->add_option("--threshold", zf_threshold);
  cmd_zeroflow->add_option("--x-lo", zf_xlo);
  cmd_zeroflow->add_option("--out", zf_out);

  // suite
  auto* cmd_suite = app.add_subcommand("suite", "batteries");
  auto* cmd_acc = cmd_suite->add_subcommand("acceptance", "run the acceptance battery");
  bool acc_quick = false;
  std::uint64_t acc_seed = kDefaultSeed;
  auto* acc_seed_opt = cmd_acc->add_option("--seed", acc_seed, "sweep seed (config seed otherwise)");
  cmd_acc->add_flag("--quick", acc_quick, "smaller dissipative grids");

  CLI11_PARSE(app, argc, argv);

  try {
    const ModelConfig model = model_from_config(config_path);

    if (cmd_model_validate->parsed()) {
      const ValidationReport rep_f = validate_model(model, validate_n);
      const ValidationReport rep_F = validate_F(model, std::max(32, validate_n / 2));
      json doc{{"model", model_to_json(model)},
               {"flux_checks", report_to_json(rep_f)},
               {"transformed_flux_checks", report_to_json(rep_F)}};
      const std::string text = doc.dump(2);
      if (!model_out.empty()) open_out(model_out) << text << "\n";
      std::cout << text << "\n";
      return (rep_f.passed && rep_F.passed) ? kExitOk : kExitVerdict;
    }

    if (cmd_lagr_eval->parsed()) {
      std::ostringstream csv;
      csv << "U,zeta,F,F_U,F_UU\n";
      for (int i = 0; i < le_n; ++i) {
        const double U = le_umin + (le_umax - le_umin) * i / std::max(1, le_n - 1);
        const FEval fe = eval_F(U, le_zeta, model);
        csv << format_g17(U) << "," << format_g17(le_zeta) << "," << format_g17(fe.F) << ","
            << format_g17(fe.F_U) << "," << format_g17(fe.F_UU) << "\n";
      }
      if (!le_out.empty()) open_out(le_out) << csv.str();
      std::cout << csv.str();
      return kExitOk;
    }

    if (cmd_classify->parsed()) {
      ShockData sh{sc_sm, sc_sp, sc_cm, sc_cp, 0.0};
      if (sc_v) {
        sh.v = *sc_v;
      } else if (std::fabs(sc_cp - sc_cm) <= 1e-12) {
        sh.v = solve_s_shock_velocity(sc_sm, sc_sp, sc_cm, model);
      } else {
        const double fp = eval_flux(sc_sp, sc_cp, model).f;
        const double fm = eval_flux(sc_sm, sc_cm, model).f;
        sh.v = (fp - fm) / (sc_sp - sc_sm);
      }
      const auto [r1, r2] = rh_residuals(sh, model);
      const Admissibility adm = admissible(sh, model);
      json doc{{"s_minus", sh.s_minus}, {"s_plus", sh.s_plus},   {"c_minus", sh.c_minus},
               {"c_plus", sh.c_plus},   {"v", sh.v},             {"rh_residuals", {r1, r2}},
               {"admissible", adm.admissible}, {"reason", adm.reason}};
      if (std::fabs(sc_cp - sc_cm) > 1e-12) {
        const NullclineType nt = classify_nullclines(sc_cm, sc_cp, sh.v, model);
        static const std::map<NullclineClass, std::string> names{
            {NullclineClass::Type0, "Type0"},   {NullclineClass::Type0I, "Type0-I"},
            {NullclineClass::TypeI, "TypeI"},   {NullclineClass::TypeI_II, "TypeI-II"},
            {NullclineClass::TypeII, "TypeII"}, {NullclineClass::Empty, "Empty"}};
        doc["nullcline_type"] = names.at(nt.cls);
        doc["roots_minus"] = nt.roots_minus;
        doc["roots_plus"] = nt.roots_plus;
      }
      const std::string text = doc.dump(2);
      if (!sc_out.empty()) open_out(sc_out) << text << "\n";
      std::cout << text << "\n";
      if (!sc_expect.empty()) {
        const bool want = sc_expect == "admissible";
        if (want != adm.admissible) return kExitVerdict;
      }
      return kExitOk;
    }

    if (cmd_portrait->parsed()) {
      const auto curves = phase_portrait(pp_cm, pp_cp, pp_v, model, pp_n);
      std::ostringstream csv;
      csv << "kind,idx,s,c\n";
      for (const PortraitCurve& pc : curves) {
        for (const auto& pt : pc.pts) {
          csv << pc.kind << "," << pc.idx << "," << format_g17(pt[0]) << "," << format_g17(pt[1])
              << "\n";
        }
      }
      if (!pp_out.empty()) open_out(pp_out) << csv.str();
      std::cout << csv.str();
      return kExitOk;
    }

    if (cmd_echeck->parsed()) {
      std::ifstream in(ec_shock);
      if (!in) throw InputError("cannot open " + ec_shock);
      json rec;
      in >> rec;
      LagrangeShockData lsh;
      if (rec.contains("s_minus")) {
        ShockData sh{rec.at("s_minus"), rec.at("s_plus"), rec.at("c_minus"), rec.at("c_plus"),
                     rec.value("v", 0.0)};
        if (!rec.contains("v")) {
          sh.v = solve_s_shock_velocity(sh.s_minus, sh.s_plus, sh.c_minus, model);
        }
        lsh = map_shock(sh, model);
      } else {
        lsh.minus = rec.at("U_minus").is_string() ? LagrangeState::dry_state(rec.at("zeta_minus"))
                                                  : LagrangeState::wet(rec.at("U_minus"),
                                                                       rec.at("zeta_minus"));
        lsh.plus = LagrangeState::wet(rec.at("U_plus"), rec.at("zeta_plus"));
        lsh.v_star = rec.at("v_star");
      }
      std::ostringstream csv;
      csv << "k,residual\n";
      const bool is_zeta = std::fabs(lsh.plus.zeta - lsh.minus.zeta) > 1e-12;
      if (is_zeta) {
        for (int i = 0; i <= 256; ++i) {
          const double k = static_cast<double>(i) / 256.0;
          const double jump_A = A_entropy_flux(lsh.plus.zeta, k, model) -
                                A_entropy_flux(lsh.minus.zeta, k, model);
          const double jump_E = std::fabs(lsh.plus.zeta - k) - std::fabs(lsh.minus.zeta - k);
          csv << format_g17(k) << "," << format_g17(jump_A - lsh.v_star * jump_E) << "\n";
        }
      } else {
        const double top = 1.5 * std::max(lsh.minus.U, lsh.plus.U);
        for (int i = 0; i <= 256; ++i) {
          const double k = 1.0 + (top - 1.0) * i / 256.0;
          const double jump_G = G_entropy_flux(lsh.plus.U, k, lsh.plus.zeta, model) -
                                G_entropy_flux(lsh.minus.U, k, lsh.plus.zeta, model);
          const double jump_E = std::fabs(lsh.plus.U - k) - std::fabs(lsh.minus.U - k);
          csv << format_g17(k) << "," << format_g17(jump_G - lsh.v_star * jump_E) << "\n";
        }
      }
      if (!ec_out.empty()) open_out(ec_out) << csv.str();
      std::cout << csv.str();
      return kExitOk;
    }

    if (cmd_rsolve->parsed()) {
      WaveFan fan;
      if (rs_coords == "orig") {
        fan = solve_system_original(parse_sc(rs_left), parse_sc(rs_right), model);
      } else if (rs_coords == "lagr") {
        fan = solve_system_lagrange(parse_lagrange_state(rs_left),
                                    parse_lagrange_state(rs_right), model);
      } else {
        throw InputError("--coords must be orig or lagr");
      }
      const json doc = fan_to_json(fan);
      const std::string text = doc.dump(2);
      if (!rs_out.empty()) open_out(rs_out) << text << "\n";
      std::cout << text << "\n";
      if (!rs_profile.empty()) {
        const WaveFan& orig = fan;
        const WaveFan converted =
            fan.coords == FanCoords::Lagrange ? to_original(fan, model) : orig;
        double xi_hi = 0.1;
        for (const Wave& w : converted.waves) {
          xi_hi = std::max(xi_hi, std::min(w.speed_hi, 1e3) * 1.25);
        }
        auto rows = fan_profile(converted, model, 0.0, xi_hi);
        auto out = open_out(rs_profile);
        out << "xi,s,c\n";
        for (const auto& r : rows) {
          out << format_g17(r[0]) << "," << format_g17(r[1]) << "," << format_g17(r[2]) << "\n";
        }
      }
      return kExitOk;
    }

    if (cmd_vrun->parsed()) {
      if (config_path.empty()) throw InputError("viscous run requires --config");
      const RunConfig rc = load_config_file(config_path);
      if (!rc.has_viscous) throw InputError("config has no /viscous block");
      RunStats stats;
      const GridField field = run(rc.viscous, rc.model, &stats);
      write_frames(field, vr_frames);
      json doc{{"steps", stats.steps},
               {"clip_events", stats.clip_events},
               {"max_mass_residual_s", stats.max_mass_residual_s},
               {"max_mass_residual_m", stats.max_mass_residual_m},
               {"frames", field.frames.size()}};
      std::cout << doc.dump(2) << "\n";
      return kExitOk;
    }

    if (cmd_contours->parsed()) {
      const GridField field = read_frames(vc_frames);
      const FieldSampler sampler = sampler_from_grid(field);
      const double x0 = field.x0 + 4.0 * field.dx;
      const double x1 = field.x0 + field.nx() * field.dx - 4.0 * field.dx;
      const double t0 = field.frames.front().t;
      const double t1 = field.frames.back().t;
      const Rect rect{x0, x1, t0 + 0.1 * (t1 - t0), t1 - 0.05 * (t1 - t0)};
      const auto [r1, r2] = contour_residual(sampler, rect, vc_n, model);
      json doc{{"rect", {rect.x0, rect.x1, rect.t0, rect.t1}},
               {"n", vc_n},
               {"residual_water", r1},
               {"residual_chemical", r2}};
      const std::string text = doc.dump(2);
      if (!vc_out.empty()) open_out(vc_out) << text << "\n";
      std::cout << text << "\n";
      return kExitOk;
    }

    if (cmd_zeroflow->parsed()) {
      const GridField field = read_frames(zf_frames);
      const T0Result t0 = t0_extract(field, zf_xlo, zf_threshold);
      const double drift = omega0_concentration_check(field, t0, 5);
      json doc{{"columns", t0.x.size()},
               {"all_finite", t0.all_finite},
               {"infinite_columns", t0.infinite_columns},
               {"max_jump", t0.max_jump},
               {"concentration_drift", drift}};
      const std::string text = doc.dump(2);
      if (!zf_out.empty()) open_out(zf_out) << text << "\n";
      std::cout << text << "\n";
      return t0.all_finite ? kExitOk : kExitVerdict;
    }

    if (cmd_acc->parsed()) {
      std::uint64_t seed = acc_seed;
      if (acc_seed_opt->count() == 0 && !config_path.empty()) {
        seed = load_config_file(config_path).seed;
      }
      std::cout << "# seed " << seed << "\n";
      const auto results = run_acceptance(model, seed, acc_quick);
      const int failures = report_acceptance(results, std::cout);
      return failures == 0 ? kExitOk : kExitVerdict;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  std::cerr << "error: no subcommand action matched\n";
  return kExitError;
}
