#include <doctest.h>

#include <limits>
#include <sstream>

#include "chosim/config.hpp"
#include "chosim/engine.hpp"

using namespace chosim;

namespace {

RunConfig training_cfg(std::uint64_t seed) {
  RunConfig cfg = Config::defaults().run;
  cfg.scenario.kind = ScenarioKind::Training;
  cfg.seed = seed;
  return cfg;
}

// Two-cell corridor with the UE parked in strong coverage.
Scenario parked_scenario() {
  Scenario s;
  s.label = "custom";
  GnbConfig g1;
  g1.id = 1;
  g1.x = 0.0;
  g1.y = 250.0;
  GnbConfig g2;
  g2.id = 2;
  g2.x = 2500.0;
  g2.y = 250.0;
  s.gnbs = {g1, g2};
  s.trajectory.start_x = 10.0;
  s.trajectory.start_y = 250.0;
  s.trajectory.end_x = 60.0;
  s.trajectory.end_y = 250.0;
  s.trajectory.base_speed = 5.0;
  s.trajectory.jitter_lo = s.trajectory.jitter_hi = 1.0;
  s.trajectory.jitter_mode = JitterMode::PerEpisode;
  s.trajectory.duration_ms = 10000.0;
  return s;
}

}  // namespace

TEST_CASE("identical seeds give bitwise-identical episode logs") {
  RunConfig cfg = training_cfg(4242);
  const RunResult a = run_episode(cfg, nullptr);
  const RunResult b = run_episode(cfg, nullptr);
  CHECK(a.log.to_jsonl() == b.log.to_jsonl());
  CHECK(a.metrics.rlf_count == b.metrics.rlf_count);

  RunConfig other = training_cfg(4243);
  const RunResult c = run_episode(other, nullptr);
  CHECK(a.log.to_jsonl() != c.log.to_jsonl());
}

TEST_CASE("a do-nothing agent reproduces the plain-CHO counts exactly") {
  for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
    RunConfig cho_cfg = training_cfg(seed);
    const RunResult baseline = run_episode(cho_cfg, nullptr);

    RunConfig drl_cfg = training_cfg(seed);
    drl_cfg.mode = SimMode::ChoDrlTrained;
    ConstantPolicy noop(1);
    const RunResult with_agent = run_episode(drl_cfg, &noop);

    CHECK(baseline.metrics.rlf_count == with_agent.metrics.rlf_count);
    CHECK(baseline.metrics.hf_count == with_agent.metrics.hf_count);
    CHECK(baseline.metrics.handover_count == with_agent.metrics.handover_count);
    CHECK(with_agent.metrics.boost_count == 0);
  }
}

TEST_CASE("parked UE in strong coverage sees no RLF and no handover") {
  RunConfig cfg = training_cfg(5);
  cfg.scenario.kind = ScenarioKind::Custom;
  cfg.channel.fading_enabled = false;
  const RunResult r = run_episode(cfg, parked_scenario(), nullptr, cfg.seed);
  CHECK(r.metrics.rlf_count == 0);
  CHECK(r.metrics.hf_count == 0);
  CHECK(r.metrics.handover_count == 0);
  CHECK(r.metrics.mean_serving_rsrp > -67.5);
}

TEST_CASE("log timestamps are nondecreasing and tick-aligned") {
  RunConfig cfg = training_cfg(99);
  const RunResult r = run_episode(cfg, nullptr);
  long prev = 0;
  for (const auto& rec : r.log.records()) {
    const long t = rec.at("t_ms").get<long>();
    CHECK(t >= prev);
    CHECK(t % 20 == 0);
    prev = t;
  }
}

TEST_CASE("hf_count never exceeds rlf_count") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RunResult r = run_episode(training_cfg(seed), nullptr);
    CHECK(r.metrics.hf_count <= r.metrics.rlf_count);
  }
}

TEST_CASE("per-tick rewards in the log sum to the transition rewards") {
  RunConfig cfg = training_cfg(31337);
  cfg.mode = SimMode::ChoDrlTraining;
  AgentHyperparams h = cfg.agent;
  h.n_start = 10;
  DqnAgent agent({kStateDim, 16, 16, 2}, h, cfg.seed);
  const RunResult r = run_episode(cfg, &agent);

  double log_sum = 0.0;
  for (const auto& rec : r.log.records())
    if (rec.at("kind") == "reward") log_sum += rec.at("total").get<double>();

  double transition_sum = 0.0;
  for (const auto& t : r.transitions) transition_sum += t.reward;

  CHECK(r.total_reward == doctest::Approx(log_sum).epsilon(1e-12));
  CHECK(transition_sum == doctest::Approx(r.total_reward).epsilon(1e-12));
  CHECK(r.decision_count == static_cast<int>(r.transitions.size()));
  if (!r.transitions.empty()) CHECK(r.transitions.back().done);
}

TEST_CASE("replaying a serialized log reproduces the metrics") {
  RunConfig cfg = training_cfg(808);
  const RunResult r = run_episode(cfg, nullptr);
  std::istringstream is(r.log.to_jsonl());
  const EpisodeLog parsed = EpisodeLog::from_jsonl(is);
  const RunMetrics m = metrics_from_log(parsed);
  CHECK(m.rlf_count == r.metrics.rlf_count);
  CHECK(m.hf_count == r.metrics.hf_count);
  CHECK(m.handover_count == r.metrics.handover_count);
  CHECK(m.ping_pong_count == r.metrics.ping_pong_count);
  CHECK(m.mean_serving_rsrp == doctest::Approx(r.metrics.mean_serving_rsrp));
}

TEST_CASE("greedy baseline equals plain CHO under this target rule") {
  RunConfig cfg = training_cfg(17);
  const RunResult cho = run_episode(cfg, nullptr);
  const RunResult greedy = run_greedy_baseline(cfg);
  CHECK(cho.metrics.rlf_count == greedy.metrics.rlf_count);
  CHECK(cho.metrics.hf_count == greedy.metrics.hf_count);
  CHECK(cho.metrics.handover_count == greedy.metrics.handover_count);
}

TEST_CASE("heatmap lattice covers the service area at the configured resolution") {
  RunConfig cfg = Config::defaults().run;
  cfg.scenario.kind = ScenarioKind::Test;
  const auto cells = rsrp_heatmap(cfg);
  CHECK(cells.size() == 301u * 51u);

  // the cell at gNB 1's position reads about the transmit power
  bool found = false;
  for (const auto& c : cells) {
    if (c.x == 50.0 && c.y == 150.0) {
      found = true;
      CHECK(c.rsrp_dbm == doctest::Approx(33.0).epsilon(1e-9));
    }
  }
  CHECK(found);

  // monotone decay along a ray leaving an isolated gNB (gNB 15 corner side)
  double prev = 1e9;
  for (double x = 2830.0; x <= 3000.0; x += 10.0) {
    for (const auto& c : cells) {
      if (c.x == x && c.y == 300.0) {
        CHECK(c.rsrp_dbm < prev);
        prev = c.rsrp_dbm;
      }
    }
  }
}

TEST_CASE("training over a few episodes produces curves and a usable agent") {
  RunConfig cfg = training_cfg(1001);
  cfg.training.episodes = 5;
  AgentHyperparams h = cfg.agent;
  h.n_start = 10;
  cfg.agent = h;
  DqnAgent agent({kStateDim, 16, 16, 2}, h, cfg.seed);
  const TrainResult tr = train(cfg, agent);
  CHECK(tr.abort_reason.empty());
  REQUIRE(tr.curves.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(tr.curves[i].episode == i + 1);
  CHECK(agent.steps_done() > 0);

  // determinism: the same seed trains to the same checkpoint bytes
  DqnAgent agent2({kStateDim, 16, 16, 2}, h, cfg.seed);
  const TrainResult tr2 = train(cfg, agent2);
  CHECK(agent.serialize() == agent2.serialize());
  CHECK(tr2.curves.size() == 5);
}

TEST_CASE("a non-finite channel value aborts the run with a tick index") {
  RunConfig cfg = training_cfg(3);
  cfg.scenario.kind = ScenarioKind::Custom;
  Scenario s = parked_scenario();
  s.gnbs[1].tx_power_initial = std::numeric_limits<double>::quiet_NaN();
  try {
    run_episode(cfg, s, nullptr, cfg.seed);
    FAIL("expected a run abort");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("tick") != std::string::npos);
  }
}
