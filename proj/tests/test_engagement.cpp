#include <cmath>
#include <random>

#include <doctest.h>

#include "salvo/engagement.hpp"
#include "salvo/errors.hpp"
#include "salvo/integrator.hpp"

using namespace salvo;

namespace {

InterceptorState scenario1_agent(int i) {
  const double x[] = {4500, 6000, 7000, 8000};
  const double v[] = {580, 590, 600, 580};
  const double h[] = {15, 20, 30, 35};
  return {x[i], 0.0, v[i], h[i] * kDegToRad, 0.0};
}

TargetState scenario1_target() {
  return TargetState::from_polar(14000, 0, 500, 120 * kDegToRad);
}

}  // namespace

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int k = 0; k < 10000; ++k) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    REQUIRE(w > -kPi);
    REQUIRE(w <= kPi);
    CHECK(std::remainder(a - w, 2 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("relative variables at the first scenario's I1 geometry") {
  const RelativeVariables rel = relative_variables(scenario1_agent(0), scenario1_target());
  CHECK(rel.range == doctest::Approx(9500.0).epsilon(1e-12));
  CHECK(rel.los == doctest::Approx(0.0));
  CHECK(rel.deviation == doctest::Approx(0.261799387799).epsilon(1e-11));
  CHECK(rel.closing == doctest::Approx(-810.236979248).epsilon(1e-11));
  CHECK(rel.transverse == doctest::Approx(282.897655733).epsilon(1e-11));
}

TEST_CASE("time-to-go at the first scenario's launch states") {
  const double expected[] = {25.7769724318, 17.9621733915, 12.2703841927, 10.7535071858};
  for (int i = 0; i < 4; ++i) {
    const InterceptorState m = scenario1_agent(i);
    const double tgo = time_to_go(relative_variables(m, scenario1_target()), m.speed, 500.0);
    CHECK(tgo == doctest::Approx(expected[i]).epsilon(1e-10));
  }
}

TEST_CASE("time-to-go guards") {
  const InterceptorState m = scenario1_agent(0);
  const RelativeVariables rel = relative_variables(m, scenario1_target());
  CHECK_THROWS_AS(time_to_go(rel, 500.0, 500.0), SpeedRatioViolation);
  CHECK_THROWS_AS(time_to_go(rel, 400.0, 500.0), SpeedRatioViolation);

  InterceptorState sideways = m;
  sideways.heading = kPi / 2;
  const RelativeVariables side = relative_variables(sideways, scenario1_target());
  CHECK_THROWS_AS(time_to_go(side, m.speed, 500.0), DeviationSingularity);
  CHECK_THROWS_AS(time_to_go_rate(side, m.speed, 500.0, 0.0), DeviationSingularity);

  InterceptorState on_top{14000, 0, 580, 0, 0};
  CHECK_THROWS_AS(relative_variables(on_top, scenario1_target()), InterceptionReached);
}

TEST_CASE("pursuit command makes the time-to-go rate exactly -1") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double vt = 100 + 400 * u(rng);
    const double vm = vt * (1.1 + 0.9 * u(rng));
    const TargetState t = TargetState::from_polar(0, 0, vt, 2 * kPi * u(rng));
    const double los = 2 * kPi * u(rng);
    const double r = 1000 + 10000 * u(rng);
    const InterceptorState m{-r * std::cos(los), -r * std::sin(los), vm,
                             los + (u(rng) - 0.5) * 2.0, 0.0};
    const RelativeVariables rel = relative_variables(m, t);
    const double a = vm * rel.transverse / rel.range;
    CHECK(time_to_go_rate(rel, vm, vt, a) == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("time-to-go rate matches a centered finite difference") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double vt = 200 + 300 * u(rng);
    const double vm = vt * (1.2 + 0.6 * u(rng));
    const TargetState t = TargetState::from_polar(8000, 1000, vt, 2 * kPi * u(rng));
    const InterceptorState m{0, 0, vm, (u(rng) - 0.5) * 1.4, 0};
    const double accel = (u(rng) - 0.5) * 100.0;
    const double h = 1e-3;

    const auto fwd = step_kinematics(m, t, accel, h);
    const auto bwd = step_kinematics(m, t, accel, -h);
    const double tp = time_to_go(relative_variables(fwd.first, fwd.second), vm, vt);
    const double tm = time_to_go(relative_variables(bwd.first, bwd.second), vm, vt);
    const double fd = (tp - tm) / (2 * h);
    const double rate = time_to_go_rate(relative_variables(m, t), vm, vt, accel);
    CHECK(fd == doctest::Approx(rate).epsilon(1e-5));
  }
}

TEST_CASE("one kinematics step follows the constant-turn arc to fifth order") {
  const double v = 600, a = 150, g0 = 0.3;
  const double w = a / v;
  auto error = [&](double h) {
    InterceptorState m{0, 0, v, g0, 0};
    const auto next = step_kinematics(m, TargetState{}, a, h).first;
    const double xe = v / w * (std::sin(g0 + w * h) - std::sin(g0));
    const double ye = -v / w * (std::cos(g0 + w * h) - std::cos(g0));
    CHECK(next.heading == doctest::Approx(g0 + w * h).epsilon(1e-14));
    return std::hypot(next.x - xe, next.y - ye);
  };
  const double e1 = error(0.4);
  const double e2 = error(0.2);
  CHECK(e1 < 1e-4);
  CHECK(e1 / e2 > 24.0);  // ~2^5
}

TEST_CASE("target propagation conserves speed and heading") {
  TargetState t = TargetState::from_polar(14000, 0, 500, 120 * kDegToRad);
  for (int k = 0; k < 20000; ++k) t = propagate_target(t, 1e-3);
  CHECK(t.speed() == doctest::Approx(500.0).epsilon(1e-14));
  CHECK(t.heading() == doctest::Approx(120 * kDegToRad).epsilon(1e-14));
  CHECK(t.z[0] == doctest::Approx(14000 + 20 * 500 * std::cos(120 * kDegToRad)).epsilon(1e-9));
}

TEST_CASE("estimated engagement variables") {
  const InterceptorState m = scenario1_agent(0);
  const TargetState t = scenario1_target();

  SUBCASE("exact estimate reproduces the true variables bit for bit") {
    const EstimatedEngagement est = estimated_engagement_variables(m, t.z);
    const RelativeVariables rel = relative_variables(m, t);
    CHECK(est.rel.range == rel.range);
    CHECK(est.rel.los == rel.los);
    CHECK(est.rel.deviation == rel.deviation);
    CHECK(est.rel.closing == rel.closing);
    CHECK(est.rel.transverse == rel.transverse);
    CHECK(est.target_speed == doctest::Approx(500.0));
    CHECK(est.target_heading == doctest::Approx(120 * kDegToRad));
  }
  SUBCASE("position perturbation along the LOS") {
    Eigen::Vector4d z = t.z;
    z[0] += 10.0;
    const EstimatedEngagement est = estimated_engagement_variables(m, z);
    CHECK(est.range == doctest::Approx(9510.0).epsilon(1e-12));
    CHECK(est.range - 9500.0 == doctest::Approx(10.0).epsilon(1e-9));
  }
  SUBCASE("degenerate estimates") {
    Eigen::Vector4d z = t.z;
    z[2] = std::nan("");
    CHECK_THROWS_AS(estimated_engagement_variables(m, z), DegenerateEstimate);
    z = t.z;
    z[0] = m.x;
    z[1] = m.y;
    CHECK_THROWS_AS(estimated_engagement_variables(m, z), DegenerateEstimate);
  }
}

TEST_CASE("rk4_step integrates an exponential to fourth order") {
  auto rhs = [](double, const Eigen::Matrix<double, 1, 1>& y) {
    return Eigen::Matrix<double, 1, 1>(-y);
  };
  Eigen::Matrix<double, 1, 1> y;
  y << 1.0;
  const double h = 0.1;
  for (int k = 0; k < 10; ++k) y = rk4_step(y, h, rhs);
  CHECK(y(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}
