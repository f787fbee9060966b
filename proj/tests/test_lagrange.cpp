#include <cmath>

#include "doctest.h"

#include "chemflood/lagrange.hpp"

using namespace chemflood;

namespace {
const ModelConfig kDefault = make_model();
}

TEST_SUITE_BEGIN("lagrange");

TEST_CASE("state transform basics") {
  CHECK(to_lagrange(1.0, 0.4, kDefault).U == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(to_lagrange(0.0, 0.7, kDefault).dry);
  CHECK(to_lagrange(0.5, 0.0, kDefault).U == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("inverse transform and error paths") {
  CHECK(from_lagrange(LagrangeState::wet(1.0, 0.3), kDefault).s == 1.0);
  CHECK(from_lagrange(LagrangeState::wet(2.0, 0.0), kDefault).s ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(from_lagrange(LagrangeState::wet(0.5, 0.0), kDefault), InputError);
  CHECK_THROWS_AS(from_lagrange(LagrangeState::dry_state(0.2), kDefault), InputError);
}

TEST_CASE("round trip over U in [1, 1e4]") {
  Rng rng(kDefaultSeed);
  for (int k = 0; k < 1000; ++k) {
    const double U = 1.0 + std::pow(10.0, rng.uniform(-3.0, 3.999));
    const double zeta = rng.uniform(0.0, 1.0);
    const SC sc = from_lagrange(LagrangeState::wet(U, zeta), kDefault);
    const LagrangeState back = to_lagrange(sc.s, sc.c, kDefault);
    CHECK(std::fabs(back.U - U) < 1e-10);
    CHECK(back.zeta == zeta);
  }
}

TEST_CASE("transformed flux values") {
  CHECK(eval_F(1.0, 0.6, kDefault).F == -1.0);
  const FEval fe = eval_F(2.0, 0.0, kDefault);
  CHECK(fe.F == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fe.F_U == doctest::Approx(-0.25).epsilon(1e-10));
  // At the curve maximum the slope vanishes.
  const double umax = U_max(0.0, kDefault);
  const FEval top = eval_F(umax, 0.0, kDefault);
  CHECK(top.F == doctest::Approx(-0.828427124746190).epsilon(1e-10));
  CHECK(std::fabs(top.F_U) < 1e-9);
}

TEST_CASE("curve landmarks against closed forms") {
  CHECK(U_max(0.0, kDefault) == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(U_max(1.0, kDefault) == doctest::Approx(1.1010205144336438).epsilon(1e-10));
  CHECK(U_inflection(0.0, kDefault) == doctest::Approx(2.0).epsilon(1e-12));
  // Oracle for U^I(1): bisection on the sign change of F_UU.
  double lo = 1.2, hi = 4.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval_F(mid, 1.0, kDefault).F_UU < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  CHECK(U_inflection(1.0, kDefault) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
  for (double zeta : {0.0, 0.3, 0.7, 1.0}) {
    CHECK(U_max(zeta, kDefault) < U_inflection(zeta, kDefault));
  }
}

TEST_CASE("slope agrees with the symmetric difference of F") {
  Rng rng(kDefaultSeed ^ 0x1234ULL);
  for (int k = 0; k < 200; ++k) {
    const double U = 1.0 + std::pow(10.0, rng.uniform(-1.5, 2.0));
    const double zeta = rng.uniform(0.0, 1.0);
    const double h = 1e-5 * U;
    const double fd =
        (eval_F(U + h, zeta, kDefault).F - eval_F(U - h, zeta, kDefault).F) / (2.0 * h);
    CHECK(eval_F(U, zeta, kDefault).F_U == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("sign ladders around the landmarks") {
  for (double zeta : {0.0, 0.5, 1.0}) {
    const double umax = U_max(zeta, kDefault);
    const double uinfl = U_inflection(zeta, kDefault);
    const double fmax = eval_F(umax, zeta, kDefault).F;
    for (int i = 0; i < 1000; ++i) {
      const double U = 1.0 + std::pow(10.0, -3.0 + 6.0 * i / 999.0);
      const FEval fe = eval_F(U, zeta, kDefault);
      CHECK(fe.F < 0.0);
      CHECK(fe.F <= fmax + 1e-12);  // global maximum property
      if (U < umax - 1e-9) CHECK(fe.F_U > 0.0);
      if (U > umax + 1e-9) CHECK(fe.F_U < 0.0);
      if (U < uinfl - 1e-9) CHECK(fe.F_UU < 0.0);
      if (U > uinfl + 1e-9) CHECK(fe.F_UU > 0.0);
    }
  }
}

TEST_CASE("inflection sign probes at zeta = 0") {
  CHECK(eval_F(1.5, 0.0, kDefault).F_UU < 0.0);
  CHECK(eval_F(3.0, 0.0, kDefault).F_UU > 0.0);
}

TEST_CASE("tail growth of |F|") {
  CHECK(eval_F(1e6, 0.0, kDefault).F < -100.0);
}

TEST_CASE("monotone dependence on zeta") {
  Rng rng(kDefaultSeed ^ 0xabcdULL);
  for (int k = 0; k < 1000; ++k) {
    const double U = 1.0 + std::pow(10.0, rng.uniform(-2.0, 3.0));
    const double zeta = rng.uniform(0.0, 1.0);
    CHECK(F_zeta(U, zeta, kDefault) < 0.0);
  }
}

TEST_CASE("validate_F passes the default model and flags the degenerate one") {
  CHECK(validate_F(kDefault, 64).passed);
  const ValidationReport rep = validate_F(make_model(FluxParams{1.0, 0.0}), 32);
  CHECK(rep.passed);
  CHECK(rep.degenerate_in_c);
}

TEST_CASE("alternative parameterizations keep the structural properties") {
  for (auto [M0, kc, A, B] :
       {std::tuple{2.0, 0.5, 0.3, 2.0}, std::tuple{0.5, 2.0, 0.8, 0.5}}) {
    const ModelConfig m = make_model(FluxParams{M0, kc}, AdsorptionParams{A, B});
    CHECK(validate_model(m, 64).passed);
    CHECK(validate_F(m, 32).passed);
    CHECK(U_max(0.5, m) < U_inflection(0.5, m));
  }
}

TEST_CASE("flux curve bundle caches the landmarks") {
  const FluxCurveL curve = make_flux_curve(0.0, kDefault);
  CHECK(curve.u_max == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(curve.u_inflection == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(1.0 < curve.u_max);
  CHECK(curve.u_max < curve.u_inflection);
  CHECK(curve.eval(2.0).F == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_SUITE_END();
