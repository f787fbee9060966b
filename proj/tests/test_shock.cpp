#include <cmath>

#include "doctest.h"

#include "chemflood/riemann.hpp"
#include "chemflood/shock.hpp"

using namespace chemflood;

namespace {

const ModelConfig kDefault = make_model();

ShockData make_s_shock(double sm, double sp, double c, const ModelConfig& m) {
  return ShockData{sm, sp, c, c, solve_s_shock_velocity(sm, sp, c, m)};
}

// Builds a c-shock from nullcline roots so that both jump relations hold.
ShockData c_shock_from_roots(double cm, double cp, double v, int idx_minus, int idx_plus,
                             const ModelConfig& m) {
  const NullclineType nt = classify_nullclines(cm, cp, v, m);
  REQUIRE(static_cast<int>(nt.roots_minus.size()) >= idx_minus + 1);
  REQUIRE(static_cast<int>(nt.roots_plus.size()) >= idx_plus + 1);
  return ShockData{nt.roots_minus[static_cast<size_t>(idx_minus)],
                   nt.roots_plus[static_cast<size_t>(idx_plus)], cm, cp, v};
}

}  // namespace

TEST_SUITE_BEGIN("shock");

TEST_CASE("adsorption chord coefficients") {
  const auto [d1, d2] = d_coeffs(1.0, 0.0, kDefault);
  CHECK(d1 == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(d2 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(d_coeffs(0.5, 0.5, kDefault), InputError);
}

TEST_CASE("s-shock velocities") {
  const double swf = 1.0 / std::sqrt(2.0);
  CHECK(solve_s_shock_velocity(swf, 0.0, 0.0, kDefault) ==
        doctest::Approx(0.5 * (1.0 + std::sqrt(2.0))).epsilon(1e-12));
  CHECK(solve_s_shock_velocity(0.5, 1.0, 0.0, kDefault) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(solve_s_shock_velocity(0.3, 0.3, 0.0, kDefault), InputError);
}

TEST_CASE("necessary restrictions") {
  const double norm = f_c1_norm(kDefault);
  CHECK(norm > 2.0);
  SUBCASE("rising concentration is rejected") {
    ShockData sh{0.8, 0.6, 0.2, 0.9, 0.5};
    CHECK_FALSE(restrictions_check(sh, kDefault, norm).ok);
  }
  SUBCASE("dry behind state is rejected") {
    ShockData sh{0.0, 0.4, 0.5, 0.5, 0.5};
    CHECK_FALSE(restrictions_check(sh, kDefault, norm).ok);
  }
  SUBCASE("dry ahead state with a concentration jump is rejected") {
    ShockData sh{0.5, 0.0, 0.5, 0.2, 0.5};
    CHECK_FALSE(restrictions_check(sh, kDefault, norm).ok);
  }
  SUBCASE("dry ahead state with matching concentration passes the gate") {
    const ShockData sh = make_s_shock(1.0 / std::sqrt(2.0), 0.0, 0.0, kDefault);
    CHECK(restrictions_check(sh, kDefault, norm).ok);
  }
  SUBCASE("velocity bounds") {
    ShockData sh{0.8, 0.4, 0.5, 0.5, -0.1};
    CHECK_FALSE(restrictions_check(sh, kDefault, norm).ok);
    sh.v = norm + 1.0;
    CHECK_FALSE(restrictions_check(sh, kDefault, norm).ok);
  }
}

TEST_CASE("chord condition on s-shocks") {
  CHECK(oleinik_s_shock(0.5, 1.0, 0.0, kDefault));          // concave stretch
  CHECK_FALSE(oleinik_s_shock(0.9, 0.6, 0.0, kDefault));    // graph above chord downward
  CHECK(oleinik_s_shock(1.0 / std::sqrt(2.0), 0.0, 0.0, kDefault));  // tangent front
  CHECK_FALSE(oleinik_s_shock(0.2, 1.0, 0.0, kDefault));    // convex start upward
}

TEST_CASE("characteristic inequalities in Lagrange coordinates") {
  SUBCASE("holds for the mapped concave shock") {
    LagrangeShockData lsh;
    lsh.minus = LagrangeState::wet(1.0, 0.0);
    lsh.plus = LagrangeState::wet(2.0, 0.0);
    lsh.v_star = 0.0;
    const LaxVerdict lv = lax_lagrange(lsh, kDefault);
    CHECK(lv.holds);
    CHECK_FALSE(lv.boundary_case);
  }
  SUBCASE("fails when reversed") {
    LagrangeShockData lsh;
    lsh.minus = LagrangeState::wet(2.0, 0.0);
    lsh.plus = LagrangeState::wet(1.0, 0.0);
    lsh.v_star = 0.0;
    CHECK_FALSE(lax_lagrange(lsh, kDefault).holds);
  }
  SUBCASE("dry boundary case with the sonic partner") {
    LagrangeShockData lsh;
    lsh.minus = LagrangeState::dry_state(0.0);
    lsh.plus = LagrangeState::wet(U_max(0.0, kDefault), 0.0);
    lsh.v_star = 0.0;
    const LaxVerdict lv = lax_lagrange(lsh, kDefault);
    CHECK(lv.holds);
    CHECK(lv.boundary_case);
  }
  SUBCASE("zeta jump is the wrong shock kind") {
    LagrangeShockData lsh;
    lsh.minus = LagrangeState::wet(1.5, 0.0);
    lsh.plus = LagrangeState::wet(1.2, 1.0);
    lsh.v_star = 0.25;
    CHECK_THROWS_AS(lax_lagrange(lsh, kDefault), WrongShockKindError);
  }
}

TEST_CASE("threshold saturation construction") {
  const SStarResult st = s_star(kDefault);
  // Hull tangency at c = 0 solves 2s^2 - 4s + 1 = 0.
  CHECK(st.s_star_s == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(st.s_star_c == doctest::Approx(0.5876952648395530).epsilon(1e-9));
  CHECK(st.s_star == doctest::Approx(st.s_star_s).epsilon(1e-12));
  CHECK(st.s_star > 0.05);
  // The chord-line construction is anchored so l(1) = 1 = f(1,c).
  const double h = 0.25;
  CHECK((1.0 + h) / (1.0 + h) == 1.0);
}

TEST_CASE("admissible shocks below the threshold are supersonic on the left") {
  const double s_star_v = s_star(kDefault).s_star;
  Rng rng(kDefaultSeed ^ 0x51aULL);
  int tested = 0;
  for (int k = 0; k < 4000 && tested < 300; ++k) {
    const double c = rng.uniform(0.0, 1.0);
    const double sm = rng.uniform(0.01, 1.0);
    const double sp = rng.uniform(0.0, 1.0);
    if (std::fabs(sp - sm) < 1e-3) continue;
    const ShockData sh = make_s_shock(sm, sp, c, kDefault);
    if (sh.v <= 0.0) continue;
    Admissibility adm;
    try {
      adm = admissible(sh, kDefault);
    } catch (const InputError&) {
      continue;
    }
    if (!adm.admissible || sh.s_minus >= s_star_v) continue;
    ++tested;
    CHECK(eval_flux(sh.s_minus, sh.c_minus, kDefault).f_s > sh.v);
  }
  CHECK(tested > 50);
}

TEST_CASE("nullcline classification across the velocity sweep") {
  SUBCASE("two roots ahead only") {
    const NullclineType nt = classify_nullclines(1.0, 0.0, 0.9, kDefault);
    CHECK(nt.cls == NullclineClass::TypeII);
    CHECK(nt.roots_minus.empty());
    REQUIRE(nt.roots_plus.size() == 2);
    CHECK(nt.roots_plus[0] == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(nt.roots_plus[1] == doctest::Approx(0.770).epsilon(0.01));
  }
  SUBCASE("two roots on both sides") {
    const NullclineType nt = classify_nullclines(1.0, 0.0, 0.83, kDefault);
    CHECK(nt.cls == NullclineClass::TypeI);
    CHECK(nt.roots_minus.size() == 2);
    CHECK(nt.roots_plus.size() == 2);
  }
  SUBCASE("no roots ahead at unit speed") {
    const NullclineType nt = classify_nullclines(1.0, 0.0, 1.0, kDefault);
    CHECK(nt.roots_plus.empty());
  }
  SUBCASE("single root on each side at low speed") {
    const NullclineType nt = classify_nullclines(1.0, 0.0, 0.5, kDefault);
    CHECK(nt.cls == NullclineClass::Type0);
    CHECK(nt.roots_minus.size() == 1);
    CHECK(nt.roots_plus.size() == 1);
  }
  SUBCASE("border root exactly at s = 1") {
    const double d1 = d_coeffs(1.0, 0.0, kDefault).first;
    const NullclineType nt = classify_nullclines(1.0, 0.0, 1.0 / (1.0 + d1), kDefault);
    CHECK(nt.cls == NullclineClass::Type0I);
    CHECK(nt.border_root);
  }
  SUBCASE("tangency on the behind boundary") {
    // Bisect the velocity to the value where the two behind-side roots
    // merge; the classification must report the intermediate type.
    const double cm = 1.0, cp = 0.0;
    const double d1 = d_coeffs(cm, cp, kDefault).first;
    const double sI = inflection_s(cm, kDefault);
    auto gmax = [&](double v) {
      auto dg = [&](double s) { return eval_flux(s, cm, kDefault).f_s - v; };
      const double p2 = bisect(dg, sI, 1.0 - 1e-14, 1e-14);
      return eval_flux(p2, cm, kDefault).f - v * (p2 + d1);
    };
    double v_lo = 0.8, v_hi = eval_flux(sI, cm, kDefault).f_s;
    REQUIRE(gmax(v_lo) > 0.0);
    for (int it = 0; it < 200 && std::fabs(gmax(0.5 * (v_lo + v_hi))) > 1e-14; ++it) {
      const double mid = 0.5 * (v_lo + v_hi);
      if (gmax(mid) > 0.0) {
        v_lo = mid;
      } else {
        v_hi = mid;
      }
    }
    const NullclineType nt = classify_nullclines(cm, cp, 0.5 * (v_lo + v_hi), kDefault);
    CHECK(nt.cls == NullclineClass::TypeI_II);
    CHECK(nt.tangent_minus);
    CHECK(nt.roots_minus.size() == 1);
    CHECK(nt.roots_plus.size() == 2);
  }
}

TEST_CASE("threshold invariant also holds for concentration shocks") {
  const double s_star_v = s_star(kDefault).s_star;
  Rng rng(kDefaultSeed ^ 0xc5ULL);
  int checked = 0, below = 0;
  const double norm = f_c1_norm(kDefault);
  for (int k = 0; k < 400; ++k) {
    const double cm = rng.uniform(0.2, 1.0);
    const double cp = rng.uniform(0.0, cm - 0.1);
    const double v = rng.uniform(0.05, 0.6);
    NullclineType nt;
    try {
      nt = classify_nullclines(cm, cp, v, kDefault);
    } catch (const SolverError&) {
      continue;
    }
    for (double sm : nt.roots_minus) {
      for (double sp : nt.roots_plus) {
        const ShockData sh{sm, sp, cm, cp, v};
        if (!restrictions_check(sh, kDefault, norm).ok) continue;
        Admissibility adm;
        try {
          adm = admissible(sh, kDefault, norm);
        } catch (const InputError&) {
          continue;
        }
        if (!adm.admissible) continue;
        ++checked;
        if (sh.s_minus < s_star_v) {
          ++below;
          CHECK(eval_flux(sh.s_minus, sh.c_minus, kDefault).f_s > sh.v);
        }
      }
    }
  }
  CHECK(checked > 200);  // the sweep actually exercised admissible c-shocks
  CHECK(below > 10);     // including ones below the threshold
}

TEST_CASE("admissibility pipeline on c-shocks") {
  SUBCASE("upper-to-lower crossing is excluded") {
    const ShockData sh = c_shock_from_roots(1.0, 0.0, 0.83, 1, 0, kDefault);
    const Admissibility adm = admissible(sh, kDefault);
    CHECK_FALSE(adm.admissible);
  }
  SUBCASE("lower-to-lower crossing is admissible") {
    const ShockData sh = c_shock_from_roots(1.0, 0.0, 0.83, 0, 0, kDefault);
    CHECK(admissible(sh, kDefault).admissible);
  }
  SUBCASE("upper-to-upper crossing is admissible") {
    const ShockData sh = c_shock_from_roots(1.0, 0.0, 0.83, 1, 1, kDefault);
    CHECK(admissible(sh, kDefault).admissible);
  }
  SUBCASE("admissible s-shock goes through the chord path") {
    const ShockData sh = make_s_shock(0.5, 1.0, 0.0, kDefault);
    CHECK(admissible(sh, kDefault).admissible);
  }
  SUBCASE("inconsistent jump data is an input error") {
    ShockData sh{0.8, 0.3, 1.0, 0.0, 0.77};
    CHECK_THROWS_AS(admissible(sh, kDefault), InputError);
  }
}

TEST_CASE("admissible shock velocities sit inside the C1 band") {
  const double norm = f_c1_norm(kDefault);
  Rng rng(kDefaultSeed ^ 0xbeefULL);
  for (int k = 0; k < 500; ++k) {
    const double c = rng.uniform(0.0, 1.0);
    const double sm = rng.uniform(0.02, 1.0);
    const double sp = rng.uniform(0.0, 1.0);
    if (std::fabs(sp - sm) < 1e-3) continue;
    const ShockData sh = make_s_shock(sm, sp, c, kDefault);
    if (sh.v <= 0.0) continue;
    Admissibility adm;
    try {
      adm = admissible(sh, kDefault, norm);
    } catch (const InputError&) {
      continue;
    }
    if (adm.admissible) {
      CHECK(sh.v > 0.0);
      CHECK(sh.v < norm);
    }
  }
}

TEST_CASE("shock map to Lagrange coordinates") {
  SUBCASE("s-shock example") {
    const ShockData sh = make_s_shock(0.5, 1.0, 0.0, kDefault);
    const LagrangeShockData lsh = map_shock(sh, kDefault);
    CHECK(lsh.minus.U == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lsh.plus.U == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lsh.plus.zeta == 0.0);
    CHECK(lsh.v_star == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("c-shock velocity is the adsorption chord") {
    const ShockData sh = c_shock_from_roots(1.0, 0.0, 0.83, 0, 0, kDefault);
    const LagrangeShockData lsh = map_shock(sh, kDefault);
    CHECK(lsh.v_star == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(lsh.minus.zeta == 0.0);
    CHECK(lsh.plus.zeta == 1.0);
  }
  SUBCASE("map preserves the jump relations") {
    Rng rng(kDefaultSeed ^ 0x77ULL);
    for (int k = 0; k < 200; ++k) {
      const double c = rng.uniform(0.0, 1.0);
      const double sm = rng.uniform(0.05, 1.0);
      const double sp = rng.uniform(0.05, 1.0);
      if (std::fabs(sp - sm) < 1e-3) continue;
      const ShockData sh = make_s_shock(sm, sp, c, kDefault);
      const auto [o1, o2] = rh_residuals(sh, kDefault);
      REQUIRE(o1 < 1e-9);
      REQUIRE(o2 < 1e-9);
      const auto [l1, l2] = rh_residuals_lagrange(map_shock(sh, kDefault), kDefault);
      CHECK(l1 < 1e-8);
      CHECK(l2 < 1e-8);
    }
    // Concentration shocks drawn from nullcline roots map just as cleanly.
    Rng rng2(kDefaultSeed ^ 0x7eULL);
    for (int k = 0; k < 100; ++k) {
      const double cm = rng2.uniform(0.2, 1.0);
      const double cp = rng2.uniform(0.0, cm - 0.1);
      const double v = rng2.uniform(0.05, 0.5);
      NullclineType nt;
      try {
        nt = classify_nullclines(cm, cp, v, kDefault);
      } catch (const SolverError&) {
        continue;
      }
      if (nt.roots_minus.empty() || nt.roots_plus.empty()) continue;
      const ShockData sh{nt.roots_minus[0], nt.roots_plus[0], cm, cp, v};
      const auto [o1, o2] = rh_residuals(sh, kDefault);
      REQUIRE(o1 < 1e-9);
      REQUIRE(o2 < 1e-9);
      const auto [l1, l2] = rh_residuals_lagrange(map_shock(sh, kDefault), kDefault);
      CHECK(l1 < 1e-8);
      CHECK(l2 < 1e-8);
    }
  }
  SUBCASE("round trip is the identity") {
    const ShockData sh = c_shock_from_roots(1.0, 0.0, 0.77, 0, 0, kDefault);
    const ShockData back = unmap_shock(map_shock(sh, kDefault), kDefault);
    CHECK(back.s_minus == doctest::Approx(sh.s_minus).epsilon(1e-10));
    CHECK(back.s_plus == doctest::Approx(sh.s_plus).epsilon(1e-10));
    CHECK(back.c_minus == sh.c_minus);
    CHECK(back.c_plus == sh.c_plus);
    CHECK(back.v == doctest::Approx(sh.v).epsilon(1e-10));
  }
  SUBCASE("dry mapping cases") {
    const ShockData front = make_s_shock(0.6, 0.0, 0.0, kDefault);
    const LagrangeShockData lsh = map_shock(front, kDefault);
    CHECK(lsh.minus.dry);
    CHECK(lsh.v_star == 0.0);
    const ShockData back = unmap_shock(lsh, kDefault);
    CHECK(back.s_plus == 0.0);
    CHECK(back.s_minus == doctest::Approx(0.6).epsilon(1e-10));
    ShockData bad{0.0, 0.5, 0.3, 0.3, 0.4};
    CHECK_THROWS_AS(map_shock(bad, kDefault), InputError);
  }
}

TEST_SUITE_END();
