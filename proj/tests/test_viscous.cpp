#include <cmath>

#include "doctest.h"

#include "chemflood/riemann.hpp"
#include "chemflood/viscous.hpp"

using namespace chemflood;

namespace {
const ModelConfig kDefault = make_model();
}

TEST_SUITE_BEGIN("viscous");

TEST_CASE("config invariants are enforced") {
  ViscousConfig vc;
  vc.N = 128;
  CHECK_THROWS_AS(run(vc, kDefault), InputError);
  vc.N = 256;
  vc.cfl = 0.9;
  CHECK_THROWS_AS(run(vc, kDefault), InputError);
  vc.cfl = 0.4;
  vc.epsilon = 0.0;
  CHECK_THROWS_AS(run(vc, kDefault), InputError);
}

TEST_CASE("constant data stays constant") {
  ViscousConfig vc;
  vc.N = 256;
  vc.L = 1.0;
  vc.T = 0.05;
  vc.epsilon = 1e-3;
  vc.left = {0.6, 0.4};
  vc.right = {0.6, 0.4};
  vc.frame_count = 4;
  RunStats stats;
  const GridField field = run(vc, kDefault, &stats);
  const Frame& last = field.frames.back();
  for (size_t i = 0; i < last.s.size(); ++i) {
    CHECK(std::fabs(last.s[i] - 0.6) < 1e-12);
    CHECK(std::fabs(last.c[i] - 0.4) < 1e-12);
  }
  CHECK(stats.max_mass_residual_s < 1e-10);
  CHECK(stats.max_mass_residual_m < 1e-10);
}

TEST_CASE("discrete conservation holds per step") {
  ViscousConfig vc;
  vc.N = 512;
  vc.L = 2.0;
  vc.T = 0.4;
  vc.epsilon = 2e-3;
  vc.left = {1.0, 1.0};
  vc.right = {0.0, 0.0};
  vc.frame_count = 8;
  RunStats stats;
  run(vc, kDefault, &stats);
  CHECK(stats.max_mass_residual_s < 1e-10);
  CHECK(stats.max_mass_residual_m < 1e-10);
}

TEST_CASE("positivity with counted clipping") {
  ViscousConfig vc;
  vc.N = 512;
  vc.L = 2.0;
  vc.T = 0.5;
  vc.epsilon = 1e-3;
  vc.left = {1.0, 1.0};
  vc.right = {0.0, 0.0};
  vc.frame_count = 8;
  const GridField field = run(vc, kDefault);
  for (const Frame& fr : field.frames) {
    for (double s : fr.s) {
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
    for (double c : fr.c) {
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
    }
  }
  CHECK(field.clip_events >= 0);
}

TEST_CASE("front speed measurement on a translated analytic profile") {
  // Synthetic field: a tanh layer moving at v = 0.8.
  GridField field;
  field.x0 = 0.0;
  field.dx = 1.0 / 512.0;
  const double v = 0.8;
  for (int k = 0; k <= 20; ++k) {
    Frame fr;
    fr.t = 0.02 * k;
    for (int i = 0; i < 1024; ++i) {
      const double x = field.x_center(i);
      fr.s.push_back(0.5 * (1.0 - std::tanh((x - 0.3 - v * fr.t) / 0.02)));
      fr.c.push_back(0.0);
    }
    field.frames.push_back(fr);
  }
  CHECK(front_speed(field, 0.5, 0) == doctest::Approx(v).epsilon(1e-3));
  SUBCASE("stationary field reports zero speed") {
    for (auto& fr : field.frames) fr.t = 0.0;
    GridField still;
    still.x0 = 0.0;
    still.dx = field.dx;
    for (int k = 0; k <= 10; ++k) {
      Frame fr = field.frames.front();
      fr.t = 0.05 * k;
      still.frames.push_back(fr);
    }
    CHECK(std::fabs(front_speed(still, 0.5, 0)) < 1e-12);
  }
  SUBCASE("levels outside the range are an error") {
    CHECK_THROWS_AS(front_speed(field, 1.5, 0), MeasurementError);
  }
}

TEST_CASE("scalar front speed approaches the envelope-fan speed") {
  ViscousConfig vc;
  vc.N = 1024;
  vc.L = 2.0;
  vc.T = 1.0;
  vc.epsilon = 1e-3;
  vc.left = {1.0, 0.0};
  vc.right = {0.0, 0.0};
  vc.frame_count = 24;
  const GridField field = run(vc, kDefault);
  const double ref = solve_bl(1.0, 0.0, 0.0, kDefault).waves.back().speed_hi;
  CHECK(front_speed(field, 0.35, 0) == doctest::Approx(ref).epsilon(0.02));
}

TEST_CASE("profile extraction endpoints") {
  ViscousConfig vc;
  vc.N = 256;
  vc.L = 1.0;
  vc.T = 0.1;
  vc.epsilon = 2e-3;
  vc.frame_count = 6;
  const GridField field = run(vc, kDefault);
  CHECK(profile_at(field, 0.0).t == 0.0);
  CHECK(profile_at(field, 0.1).t == doctest::Approx(0.1).epsilon(1e-9));
  CHECK_THROWS_AS(profile_at(field, 0.5), InputError);
}

TEST_CASE("shock-layer width scales with the dissipation") {
  // Width of the s-front, measured between level crossings at 0.15 and 0.55,
  // halves (within tolerance) when epsilon does.
  auto width_at = [&](double eps) {
    ViscousConfig vc;
    vc.N = 2048;
    vc.L = 2.0;
    vc.T = 0.8;
    vc.epsilon = eps;
    vc.left = {1.0, 0.0};
    vc.right = {0.0, 0.0};
    vc.frame_count = 8;
    const GridField field = run(vc, kDefault);
    const Frame& last = field.frames.back();
    double x_hi = 0.0, x_lo = 0.0;
    for (size_t i = 1; i < last.s.size(); ++i) {
      if (last.s[i - 1] >= 0.55 && last.s[i] < 0.55) x_hi = field.x_center(static_cast<int>(i));
      if (last.s[i - 1] >= 0.15 && last.s[i] < 0.15) x_lo = field.x_center(static_cast<int>(i));
    }
    return x_lo - x_hi;
  };
  const double w2 = width_at(2e-3);
  const double w1 = width_at(1e-3);
  const double ratio = w2 / w1;
  CHECK(ratio > 1.7);
  CHECK(ratio < 2.3);
}

TEST_SUITE_END();
