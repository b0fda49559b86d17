#include <cmath>

#include <doctest.h>

#include "salvo/studies.hpp"

using namespace salvo;

TEST_CASE("random pursuit geometries stay in range") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const PursuitGeometry g = random_pursuit_geometry(seed);
    CHECK(g.speed_ratio >= 1.1);
    CHECK(g.speed_ratio <= 2.0);
    CHECK(std::abs(g.deviation) <= 60 * kDegToRad);
    CHECK(g.speed_ratio * std::sin(std::abs(g.deviation)) < 1.0);
  }
}

TEST_CASE("deviated pursuit holds its deviation") {
  const PursuitGeometry g = random_pursuit_geometry(3);
  const PursuitFlight f = fly_deviated_pursuit(g, 1e-3, 0.5);
  CHECK(f.captured);
  CHECK(std::abs(f.predicted_tgo - f.flight_time) <= 2e-3);
  CHECK(f.tgo_log.size() > 2);
}

TEST_CASE("time-to-go study on a handful of engagements") {
  const TgoStudy s = verify_time_to_go(10, 100);
  CHECK(s.passed == 10);
  CHECK(s.tolerance == 2e-3);
}

TEST_CASE("pursuit rate study") {
  const RateStudy s = pursuit_rate_study(3, 7);
  CHECK(s.samples > 100);
  CHECK(s.worst_slope_error < 1e-3);
}
