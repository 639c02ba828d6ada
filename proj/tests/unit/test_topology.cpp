#include <doctest.h>

#include <cmath>

#include "chosim/topology.hpp"

using namespace chosim;

TEST_CASE("test scenario reproduces the 15-gNB deployment") {
  const Scenario s = build_test_scenario();
  REQUIRE(s.gnbs.size() == 15);
  CHECK(s.gnbs[0].x == 50.0);
  CHECK(s.gnbs[0].y == 150.0);
  CHECK(s.gnbs[14].x == 2830.0);
  CHECK(s.gnbs[14].y == 300.0);

  // all 14 consecutive pairwise distances
  const double expected[14] = {228.04, 390.00, 186.01, 222.04, 233.45, 192.09, 148.66,
                               301.04, 191.05, 298.20, 364.01, 222.77, 332.64, 272.44};
  for (int i = 0; i < 14; ++i) {
    CHECK(std::abs(distance(s.gnbs[i], s.gnbs[i + 1]) - expected[i]) < 0.01);
  }

  CHECK(s.trajectory.start_x == 0.0);
  CHECK(s.trajectory.end_x == 3000.0);
  CHECK(s.trajectory.start_y == 250.0);
  CHECK(s.gnbs[3].tx_power == 33.0);
  CHECK(s.gnbs[3].tx_power_max == 38.5);
}

TEST_CASE("training scenario draws stay inside the documented ranges") {
  double min_x1 = 1e9, max_x1 = -1e9;
  for (int seed = 0; seed < 10000; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    const Scenario s = build_training_scenario(rng);
    REQUIRE(s.gnbs.size() == 2);
    const auto& g1 = s.gnbs[0];
    const auto& g2 = s.gnbs[1];
    min_x1 = std::min(min_x1, g1.x);
    max_x1 = std::max(max_x1, g1.x);
    CHECK(g1.x >= 2.0);
    CHECK(g1.x <= 100.0);
    CHECK(g1.y >= 230.0);
    CHECK(g1.y <= 240.0);
    CHECK(g1.tx_power >= 33.0);
    CHECK(g1.tx_power <= 40.0);
    CHECK(g2.x >= 200.0);
    CHECK(g2.x <= 350.0);
    CHECK(g2.y >= 260.0);
    CHECK(g2.y <= 270.0);
    CHECK(g2.tx_power == 33.0);
    CHECK(s.trajectory.duration_ms == 10000.0);
  }
  // the draws actually cover the range
  CHECK(min_x1 < 10.0);
  CHECK(max_x1 > 90.0);
}

TEST_CASE("scenario construction is a pure function of the seed") {
  Rng a(1234), b(1234);
  const Scenario s1 = build_training_scenario(a);
  const Scenario s2 = build_training_scenario(b);
  CHECK(s1.gnbs[0].x == s2.gnbs[0].x);
  CHECK(s1.gnbs[0].tx_power == s2.gnbs[0].tx_power);
  CHECK(s1.gnbs[1].y == s2.gnbs[1].y);
  CHECK(s1.trajectory.base_speed == s2.trajectory.base_speed);
}

TEST_CASE("mobility advances by speed * dt with unit jitter") {
  UeTrajectory t;
  t.start_x = 0.0;
  t.start_y = 250.0;
  t.end_x = 3000.0;
  t.end_y = 250.0;
  t.base_speed = 40.0 * 1000.0 / 3600.0;  // 11.111 m/s
  t.jitter_lo = t.jitter_hi = 1.0;
  t.jitter_mode = JitterMode::PerStep;
  t.duration_ms = 1e9;

  UeMobility mob(t, Rng(5));
  mob.advance(20.0);
  CHECK(mob.x() == doctest::Approx(0.22222).epsilon(1e-4));
  CHECK(mob.y() == 250.0);

  // total displacement equals speed * elapsed
  for (int i = 0; i < 99; ++i) mob.advance(20.0);
  CHECK(mob.x() == doctest::Approx(t.base_speed * 2.0).epsilon(1e-9));
}

TEST_CASE("test-run x coordinate is monotone nondecreasing until the far edge") {
  const Scenario s = build_test_scenario();
  UeMobility mob(s.trajectory, Rng(99));
  double prev = mob.x();
  int guard = 0;
  while (mob.advance(20.0) && guard++ < 1000000) {
    CHECK(mob.x() >= prev);
    prev = mob.x();
  }
  CHECK(mob.x() >= 3000.0);
}
