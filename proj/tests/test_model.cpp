#include <cmath>

#include "doctest.h"

#include "chemflood/model.hpp"

using namespace chemflood;

namespace {

const ModelConfig kDefault = make_model();

// Central-difference oracles, independent of the analytic derivative path.
double fd_f_s(double s, double c, const ModelConfig& m, double h = 1e-6) {
  return (eval_flux(s + h, c, m).f - eval_flux(s - h, c, m).f) / (2.0 * h);
}
double fd_f_c(double s, double c, const ModelConfig& m, double h = 1e-6) {
  return (eval_flux(s, c + h, m).f - eval_flux(s, c - h, m).f) / (2.0 * h);
}
double fd_f_ss(double s, double c, const ModelConfig& m, double h = 1e-5) {
  return (eval_flux(s + h, c, m).f - 2.0 * eval_flux(s, c, m).f + eval_flux(s - h, c, m).f) /
         (h * h);
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("flux endpoint identities") {
  CHECK(eval_flux(0.0, 0.3, kDefault).f == 0.0);
  CHECK(eval_flux(1.0, 0.3, kDefault).f == 1.0);
  CHECK(eval_flux(0.5, 0.0, kDefault).f == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_flux(0.0, 0.7, kDefault).f_s == 0.0);
  CHECK(eval_flux(1.0, 0.7, kDefault).f_s == 0.0);
}

TEST_CASE("closed-form values at the unit mobility ratio") {
  // f_s(0.5, 0) = 2 and the thickened midpoint f(0.5, 1) = 1/3.
  CHECK(eval_flux(0.5, 0.0, kDefault).f_s == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eval_flux(0.5, 1.0, kDefault).f == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("analytic derivatives agree with central differences") {
  Rng rng(kDefaultSeed);
  for (int k = 0; k < 1000; ++k) {
    const double s = rng.uniform(0.05, 0.95);
    const double c = rng.uniform(0.05, 0.95);
    const FluxEval fe = eval_flux(s, c, kDefault);
    CHECK(fe.f_s == doctest::Approx(fd_f_s(s, c, kDefault)).epsilon(1e-6));
    CHECK(fe.f_c == doctest::Approx(fd_f_c(s, c, kDefault)).epsilon(1e-6));
    CHECK(flux_ss(s, c, kDefault) == doctest::Approx(fd_f_ss(s, c, kDefault)).epsilon(1e-4));
  }
}

TEST_CASE("flux is monotone in c when thickening is active") {
  Rng rng(kDefaultSeed ^ 0x9e37ULL);
  for (int k = 0; k < 1000; ++k) {
    const double s = rng.uniform(0.01, 0.99);
    const double c = rng.uniform(0.01, 0.99);
    CHECK(eval_flux(s, c, kDefault).f_c < 0.0);
  }
}

TEST_CASE("adsorption closed forms") {
  CHECK(eval_adsorption(0.0, kDefault).a == 0.0);
  CHECK(eval_adsorption(1.0, kDefault).a == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(eval_adsorption(0.0, kDefault).a_c == doctest::Approx(0.5).epsilon(1e-15));
  for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(eval_adsorption(c, kDefault).a_cc < 0.0);
  }
}

TEST_CASE("parameter bounds are rejected at construction") {
  CHECK_THROWS_AS(make_model(FluxParams{1.0, -0.5}), InputError);
  CHECK_THROWS_AS(make_model(FluxParams{0.0, 1.0}), InputError);
  CHECK_THROWS_AS(make_model(FluxParams{}, AdsorptionParams{-0.5, 1.0}), InputError);
}

TEST_CASE("domain violations raise input errors") {
  CHECK_THROWS_AS(eval_flux(-0.1, 0.5, kDefault), InputError);
  CHECK_THROWS_AS(eval_flux(0.5, 1.5, kDefault), InputError);
  CHECK_THROWS_AS(eval_adsorption(-0.2, kDefault), InputError);
}

TEST_CASE("validate_model passes the default configuration") {
  const ValidationReport rep = validate_model(kDefault, 128);
  CHECK(rep.passed);
  CHECK_FALSE(rep.degenerate_in_c);
}

TEST_CASE("validate_model flags the degenerate c-independent flux") {
  const ModelConfig flat = make_model(FluxParams{1.0, 0.0});
  const ValidationReport rep = validate_model(flat, 64);
  CHECK(rep.passed);
  CHECK(rep.degenerate_in_c);
  bool noted = false;
  for (const auto& issue : rep.issues) {
    if (issue.note.find("degenerate") != std::string::npos) noted = true;
  }
  CHECK(noted);
}

TEST_CASE("inflection saturation") {
  CHECK(inflection_s(0.0, kDefault) == doctest::Approx(0.5).epsilon(1e-11));
  // Bisection oracle on the second-difference sign change.
  const double c = 1.0;
  double lo = 0.01, hi = 0.99;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fd_f_ss(mid, c, kDefault) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  CHECK(inflection_s(1.0, kDefault) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-5));
  CHECK(inflection_s(1.0, kDefault) == doctest::Approx(0.613).epsilon(0.01));
}

TEST_CASE("water-front saturation matches the closed form sqrt(M/(M+1))") {
  CHECK(water_front_s(0.0, kDefault) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(water_front_s(1.0, kDefault) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  // psi(1,c) = 1: the root is strictly interior.
  for (double c : {0.0, 0.5, 1.0}) {
    CHECK(water_front_s(c, kDefault) < 1.0);
  }
}

TEST_CASE("slice structure: monotone, single inflection, ordered landmarks") {
  for (int j = 0; j < 33; ++j) {
    const double c = j / 32.0;
    double prev = 0.0;
    for (int i = 1; i < 64; ++i) {
      const double f = eval_flux(i / 64.0, c, kDefault).f;
      CHECK(f > prev);
      prev = f;
    }
    int sign_changes = 0;
    double prev_ss = flux_ss(1.0 / 128.0, c, kDefault);
    for (int i = 2; i < 128; ++i) {
      const double ss = flux_ss(i / 128.0, c, kDefault);
      if ((prev_ss < 0.0) != (ss < 0.0)) ++sign_changes;
      prev_ss = ss;
    }
    CHECK(sign_changes == 1);
    CHECK(inflection_s(c, kDefault) < water_front_s(c, kDefault));
  }
}

TEST_SUITE_END();
