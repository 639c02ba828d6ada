#include <doctest.h>

#include "chosim/config.hpp"

using namespace chosim;

TEST_CASE("defaults carry the documented simulation parameters") {
  const Config c = Config::defaults();
  CHECK(c.run.channel.alpha == 2.8);
  CHECK(c.run.channel.d0 == 1.0);
  CHECK(c.run.channel.epsilon_los == 0.8);
  CHECK(c.run.channel.avg_window == 5);
  CHECK(c.run.rlf.s_rlf_dbm == -67.5);
  CHECK(c.run.rlf.q_in_dbm == -67.5);
  CHECK(c.run.rlf.n310 == 6);
  CHECK(c.run.rlf.t310_ms == 1000.0);
  CHECK(c.run.cho.o_prep_db == 1.0);
  CHECK(c.run.cho.o_exec_db == 6.0);
  CHECK(c.run.cho.t_prep_ms == 100.0);
  CHECK(c.run.cho.t_exec_ms == 80.0);
  CHECK(c.run.power.increment_mw == 2000.0);
  CHECK(c.run.power.cap_dbm == 38.5);
  CHECK(c.run.agent.gamma == 0.95);
  CHECK(c.run.agent.tau_eps == 5000.0);
  CHECK(c.run.agent.buffer_capacity == 10000);
  CHECK(c.run.agent.batch == 64);
  CHECK(c.run.agent.n_start == 50);
  CHECK(c.run.agent.c_target == 100);
  CHECK(c.run.agent.g_max == 10.0);
  CHECK(c.run.training.episodes == 2000);
  CHECK(c.run.scenario.ue_speed_kmh == 40.0);
  CHECK(c.run.scenario.gnb_tx_power_dbm == 33.0);
  CHECK(c.run.scenario.gnb_tx_power_max_dbm == 38.5);
  CHECK(c.frequency_ghz == 25.0);
  CHECK(c.bandwidth_mhz == 100.0);
  CHECK(c.run.area_x_m == 3000.0);
  CHECK(c.run.area_y_m == 500.0);
}

TEST_CASE("canonical round trip preserves everything") {
  Config a = Config::defaults();
  a.run.cho.o_exec_db = 4.0;
  a.run.seed = 99;
  const Config b = Config::from_string(a.canonical());
  CHECK(b.canonical() == a.canonical());
  CHECK(b.hash() == a.hash());
  CHECK(b.run.cho.o_exec_db == 4.0);
  CHECK(b.run.seed == 99);
}

TEST_CASE("parses sections, comments, and overrides") {
  const Config c = Config::from_string(
      "# a comment\n"
      "[cho]\n"
      "o_exec_db = 4\n"
      "\n"
      "[rlf]\n"
      "n310 = 5\n"
      "s_rlf_dbm = -65\n");
  CHECK(c.run.cho.o_exec_db == 4.0);
  CHECK(c.run.rlf.n310 == 5);
  CHECK(c.run.rlf.s_rlf_dbm == -65.0);
  CHECK(c.run.rlf.q_in_dbm == -65.0);  // tied to s_rlf unless set explicitly
}

TEST_CASE("unknown keys and sections are line-anchored errors") {
  try {
    Config::from_string("[cho]\nbogus_key = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
  }

  try {
    Config::from_string("[cho]\no_exec_db = 4\n[nonsense]\nk = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 4);
  }

  CHECK_THROWS_AS(Config::from_string("[cho]\no_exec_db = not_a_number\n"), ConfigError);
  CHECK_THROWS_AS(Config::from_string("key_without_section = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::from_string("[cho\no_exec_db = 4\n"), ConfigError);
}

TEST_CASE("validation rejects timers that the tick does not divide") {
  CHECK_THROWS_AS(Config::from_string("[cho]\nt_prep_ms = 90\n"), ConfigError);
  CHECK_THROWS_AS(Config::from_string("[rlf]\nt310_ms = 1010\n"), ConfigError);
  CHECK_THROWS_AS(Config::from_string("[simulation]\nrsrp_sample_period_ms = 30\n"), ConfigError);
  // multiples are fine
  const Config c = Config::from_string("[simulation]\nrsrp_sample_period_ms = 200\n");
  CHECK(c.run.rsrp_sample_period_ms == 200.0);
}

TEST_CASE("dotted overrides apply with the same validation") {
  Config c = Config::defaults();
  c.set("rlf.n310", "8");
  CHECK(c.run.rlf.n310 == 8);
  CHECK_THROWS_AS(c.set("rlf.bogus", "1"), ConfigError);
  CHECK_THROWS_AS(c.set("cho.t_prep_ms", "55"), ConfigError);
}

TEST_CASE("custom gNB sections build a scenario") {
  const Config c = Config::from_string(
      "[scenario]\n"
      "kind = custom\n"
      "[gnb 1]\n"
      "x = 100\n"
      "y = 250\n"
      "tx_power_dbm = 35\n"
      "[gnb 2]\n"
      "x = 900\n"
      "y = 250\n");
  REQUIRE(c.run.scenario.custom_gnbs.size() == 2);
  CHECK(c.run.scenario.custom_gnbs[0].x == 100.0);
  CHECK(c.run.scenario.custom_gnbs[0].tx_power == 35.0);
  CHECK(c.run.scenario.custom_gnbs[1].tx_power == 33.0);  // section default

  // hash differs from defaults
  CHECK(c.hash() != Config::defaults().hash());
}

TEST_CASE("training option grids parse as lists") {
  const Config c = Config::from_string("[training]\nn310_options = 3, 5, 6, 8\n"
                                       "s_rlf_options = -70,-67.5,-65\n");
  CHECK(c.run.training.n310_options == std::vector<int>{3, 5, 6, 8});
  CHECK(c.run.training.s_rlf_options == std::vector<double>{-70.0, -67.5, -65.0});
}
