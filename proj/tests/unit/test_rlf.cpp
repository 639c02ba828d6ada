#include <doctest.h>

#include "chosim/rlf.hpp"
#include "chosim/rng.hpp"

using namespace chosim;

namespace {
const RlfParams kDefaults;  // n310=6, t310=1000 ms, thresholds -67.5 dBm
}

TEST_CASE("constant sub-threshold stream: T310 at the 6th sample, RLF at 1120 ms") {
  RlfMonitor mon(kDefaults);
  const double dt = 20.0;
  double t = 0.0;
  double t310_started_at = -1.0;
  double rlf_at = -1.0;
  while (rlf_at < 0.0) {
    t += dt;
    const auto obs = mon.observe(-70.0, dt);
    CHECK(obs.indication == SyncIndication::OutOfSync);
    if (obs.t310_started) t310_started_at = t;
    if (obs.rlf_declared) rlf_at = t;
    REQUIRE(t < 5000.0);
  }
  CHECK(t310_started_at == 120.0);  // n310 * dt
  CHECK(rlf_at == 1120.0);          // n310 * dt + t310, exactly
}

TEST_CASE("an in-sync sample resets the counter before N310 is reached") {
  RlfMonitor mon(kDefaults);
  for (int i = 0; i < 5; ++i) {
    const auto obs = mon.observe(-70.0, 20.0);
    CHECK(!obs.t310_started);
  }
  const auto obs = mon.observe(-60.0, 20.0);
  CHECK(obs.indication == SyncIndication::InSync);
  CHECK(mon.state().consecutive_oos == 0);
  CHECK(!mon.state().t310_running);

  // five more below-threshold samples still do not start T310
  for (int i = 0; i < 5; ++i) CHECK(!mon.observe(-70.0, 20.0).t310_started);
  CHECK(mon.observe(-70.0, 20.0).t310_started);
}

TEST_CASE("T310 stops on recovery above Q_in and no RLF is declared") {
  RlfMonitor mon(kDefaults);
  for (int i = 0; i < 6; ++i) mon.observe(-70.0, 20.0);
  CHECK(mon.state().t310_running);
  for (int i = 0; i < 40; ++i) mon.observe(-70.0, 20.0);  // 800 ms elapsed
  const auto obs = mon.observe(-67.0, 20.0);
  CHECK(obs.indication == SyncIndication::InSync);
  CHECK(obs.t310_stopped);
  CHECK(!obs.rlf_declared);
  CHECK(!mon.state().t310_running);
  CHECK(mon.state().t310_elapsed_ms == 0.0);
}

TEST_CASE("T310Started count always >= RlfDeclared count") {
  // randomized sample streams; property over many runs
  RlfParams p;
  p.n310 = 3;
  p.t310_ms = 100.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    RlfMonitor mon(p);
    int started = 0, declared = 0;
    for (int i = 0; i < 500; ++i) {
      const double rsrp = -67.5 + 10.0 * (rng.uniform01() - 0.5);
      const auto obs = mon.observe(rsrp, 20.0);
      if (obs.t310_started) ++started;
      if (obs.rlf_declared) {
        ++declared;
        mon.reset();
      }
    }
    CHECK(started >= declared);
  }
}

TEST_CASE("reset returns a pristine state and is idempotent") {
  RlfMonitor mon(kDefaults);
  for (int i = 0; i < 20; ++i) mon.observe(-70.0, 20.0);
  mon.reset();
  CHECK(mon.state().consecutive_oos == 0);
  CHECK(!mon.state().t310_running);
  CHECK(mon.state().t310_elapsed_ms == 0.0);
  CHECK(!mon.state().rlf_declared);
  mon.reset();
  CHECK(mon.state().consecutive_oos == 0);

  const auto obs = mon.observe(-60.0, 20.0);
  CHECK(obs.indication == SyncIndication::InSync);
  CHECK(mon.state().consecutive_oos == 0);
}

TEST_CASE("dead band between S_RLF and Q_in gives no indication but T310 runs on") {
  RlfParams p;
  p.s_rlf_dbm = -70.0;
  p.q_in_dbm = -65.0;
  p.n310 = 2;
  p.t310_ms = 60.0;
  RlfMonitor mon(p);
  mon.observe(-72.0, 20.0);
  mon.observe(-72.0, 20.0);  // T310 starts
  CHECK(mon.state().t310_running);
  const auto band = mon.observe(-67.0, 20.0);  // inside the band
  CHECK(band.indication == SyncIndication::None);
  CHECK(mon.state().t310_running);
  CHECK(mon.state().t310_elapsed_ms == 20.0);
  mon.observe(-67.0, 20.0);
  const auto last = mon.observe(-67.0, 20.0);
  CHECK(last.rlf_declared);
}
