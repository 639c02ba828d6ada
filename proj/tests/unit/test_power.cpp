#include <doctest.h>

#include <cmath>

#include "chosim/power_control.hpp"
#include "chosim/rng.hpp"

using namespace chosim;

TEST_CASE("boost arithmetic happens in milliwatts") {
  PowerParams p;
  PowerController ctl(33.0, p);
  CHECK(ctl.request_boost() == BoostResult::Applied);
  // 1995.26 mW + 2000 mW = 3995.26 mW = 36.02 dBm
  CHECK(std::abs(ctl.current_power() - 36.0155) < 1e-3);
}

TEST_CASE("boost clamps at the cap K") {
  PowerParams p;
  PowerController ctl(38.0, p);
  CHECK(ctl.request_boost() == BoostResult::Applied);
  // 6309.57 + 2000 mW = 39.20 dBm, clamped to 38.5
  CHECK(ctl.current_power() == doctest::Approx(38.5));
}

TEST_CASE("a base power above K raises the effective cap and never drops") {
  PowerParams p;
  PowerController ctl(40.0, p);
  CHECK(ctl.request_boost() == BoostResult::Applied);
  CHECK(ctl.current_power() == doctest::Approx(40.0));
}

TEST_CASE("requests during an active boost or cooldown are suppressed") {
  PowerParams p;
  PowerController ctl(33.0, p);
  REQUIRE(ctl.request_boost() == BoostResult::Applied);
  CHECK(ctl.request_boost() == BoostResult::Suppressed);
  // run out the boost
  for (int i = 0; i < 25; ++i) ctl.tick(20.0);
  CHECK(!ctl.boost_active());
  CHECK(ctl.cooldown_active());
  CHECK(ctl.request_boost() == BoostResult::Suppressed);
  // run out the cooldown
  for (int i = 0; i < 25; ++i) ctl.tick(20.0);
  CHECK(ctl.request_boost() == BoostResult::Applied);
}

TEST_CASE("reversion lands on the 25th tick for a 500 ms boost at dt=20") {
  PowerParams p;
  PowerController ctl(33.0, p);
  ctl.request_boost();
  int reverted_on = 0;
  for (int i = 1; i <= 30; ++i) {
    if (ctl.tick(20.0) == ReversionEvent::Reverted) {
      reverted_on = i;
      break;
    }
  }
  CHECK(reverted_on == 25);
  CHECK(ctl.current_power() == doctest::Approx(33.0));
}

TEST_CASE("idle ticks change nothing") {
  PowerParams p;
  PowerController ctl(33.0, p);
  for (int i = 0; i < 100; ++i) CHECK(ctl.tick(20.0) == ReversionEvent::None);
  CHECK(ctl.current_power() == doctest::Approx(33.0));
}

TEST_CASE("power never exceeds the cap across randomized request/tick runs") {
  PowerParams p;
  Rng rng(77);
  for (int run = 0; run < 20; ++run) {
    PowerController ctl(rng.uniform(33.0, 40.0), p);
    const double cap = std::max(p.cap_dbm, ctl.base_power());
    for (int i = 0; i < 500; ++i) {
      if (rng.uniform01() < 0.2) ctl.request_boost();
      ctl.tick(20.0);
      CHECK(ctl.current_power() <= cap + 1e-12);
    }
  }
}

TEST_CASE("applied boosts are separated by at least boost + cooldown") {
  PowerParams p;
  PowerController ctl(33.0, p);
  Rng rng(3);
  double t = 0.0;
  double last_applied = -1e18;
  for (int i = 0; i < 2000; ++i) {
    t += 20.0;
    ctl.tick(20.0);
    if (rng.uniform01() < 0.5 && ctl.request_boost() == BoostResult::Applied) {
      if (last_applied > -1e18) CHECK(t - last_applied >= p.boost_ms + p.cooldown_ms);
      last_applied = t;
    }
  }
}
