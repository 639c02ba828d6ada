#include "chosim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chosim {

namespace {

constexpr std::uint64_t kStreamScenario = 1;
constexpr std::uint64_t kStreamJitter = 2;
constexpr std::uint64_t kStreamGrid = 7;
constexpr std::uint64_t kStreamLinkBase = 100;

bool divides(double dt, double window) {
  const double k = window / dt;
  return std::abs(k - std::round(k)) < 1e-9;
}

int index_of(const std::vector<GnbConfig>& gnbs, int id) {
  for (std::size_t i = 0; i < gnbs.size(); ++i)
    if (gnbs[i].id == id) return static_cast<int>(i);
  return -1;
}

}  // namespace

std::string to_string(SimMode mode) {
  switch (mode) {
    case SimMode::Cho: return "cho";
    case SimMode::ChoDrlTrained: return "cho_drl";
    case SimMode::ChoDrlTraining: return "cho_drl_training";
    case SimMode::GreedyBaseline: return "greedy";
  }
  return "cho";
}

SimMode sim_mode_from_string(const std::string& s) {
  if (s == "cho") return SimMode::Cho;
  if (s == "cho_drl") return SimMode::ChoDrlTrained;
  if (s == "cho_drl_training") return SimMode::ChoDrlTraining;
  if (s == "greedy") return SimMode::GreedyBaseline;
  throw std::invalid_argument("unknown mode: " + s +
                              " (expected cho, cho_drl, cho_drl_training or greedy)");
}

void RunConfig::validate() const {
  if (dt_ms <= 0) throw std::invalid_argument("dt_ms must be positive");
  if (!divides(dt_ms, cho.t_prep_ms)) throw std::invalid_argument("dt_ms must divide t_prep_ms");
  if (!divides(dt_ms, cho.t_exec_ms)) throw std::invalid_argument("dt_ms must divide t_exec_ms");
  if (!divides(dt_ms, rlf.t310_ms)) throw std::invalid_argument("dt_ms must divide t310_ms");
  if (rsrp_sample_period_ms < dt_ms || !divides(dt_ms, rsrp_sample_period_ms))
    throw std::invalid_argument("rsrp_sample_period_ms must be a multiple of dt_ms");
  if (channel.alpha <= 0) throw std::invalid_argument("alpha must be positive");
  if (channel.d0 <= 0) throw std::invalid_argument("d0_m must be positive");
  if (channel.epsilon_los <= 0 || channel.epsilon_los >= 1)
    throw std::invalid_argument("epsilon_los must lie in (0, 1)");
  if (channel.avg_window < 1) throw std::invalid_argument("avg_window must be >= 1");
  if (rlf.n310 < 1) throw std::invalid_argument("n310 must be >= 1");
  if (rlf.t310_ms <= 0) throw std::invalid_argument("t310_ms must be positive");
  if (rlf.q_in_dbm < rlf.s_rlf_dbm)
    throw std::invalid_argument("q_in_dbm must be >= s_rlf_dbm");
  if (cho.t_prep_ms <= 0 || cho.t_exec_ms <= 0 || cho.o_prep_db <= 0 || cho.o_exec_db <= 0)
    throw std::invalid_argument("cho parameters must be positive");
  if (agent.batch < 1) throw std::invalid_argument("batch must be >= 1");
  if (agent.buffer_capacity < static_cast<std::size_t>(agent.batch))
    throw std::invalid_argument("buffer must be >= batch");
  if (scenario.kind == ScenarioKind::Custom && scenario.custom_gnbs.size() < 2)
    throw std::invalid_argument("custom scenario needs at least 2 gNBs");
}

Scenario build_scenario(const RunConfig& cfg, std::uint64_t seed) {
  switch (cfg.scenario.kind) {
    case ScenarioKind::Training: {
      Rng rng(Rng::mix(seed, kStreamScenario));
      TrainingScenarioOptions opts;
      opts.base_speed_kmh_lo = cfg.training.base_speed_kmh_lo;
      opts.base_speed_kmh_hi = cfg.training.base_speed_kmh_hi;
      opts.speed_scale_lo = cfg.training.speed_scale_lo;
      opts.speed_scale_hi = cfg.training.speed_scale_hi;
      opts.tx_power_max = cfg.scenario.gnb_tx_power_max_dbm;
      return build_training_scenario(rng, opts);
    }
    case ScenarioKind::Test:
      return build_test_scenario(cfg.scenario.ue_path_y_m, cfg.scenario.ue_speed_kmh,
                                 cfg.scenario.gnb_tx_power_dbm, cfg.scenario.gnb_tx_power_max_dbm);
    case ScenarioKind::Custom: {
      Scenario s = build_test_scenario(cfg.scenario.ue_path_y_m, cfg.scenario.ue_speed_kmh,
                                       cfg.scenario.gnb_tx_power_dbm,
                                       cfg.scenario.gnb_tx_power_max_dbm);
      s.gnbs = cfg.scenario.custom_gnbs;
      std::sort(s.gnbs.begin(), s.gnbs.end(),
                [](const GnbConfig& a, const GnbConfig& b) { return a.id < b.id; });
      s.trajectory.end_x = cfg.area_x_m;
      s.label = "custom";
      return s;
    }
  }
  throw std::logic_error("unreachable scenario kind");
}

RunResult run_episode(const RunConfig& cfg, ActionPolicy* policy) {
  return run_episode(cfg, build_scenario(cfg, cfg.seed), policy, cfg.seed);
}

RunResult run_episode(const RunConfig& cfg, const Scenario& scenario, ActionPolicy* policy,
                      std::uint64_t run_seed) {
  cfg.validate();
  const auto& gnbs = scenario.gnbs;
  const int n = static_cast<int>(gnbs.size());
  const double dt = cfg.dt_ms;
  const int stride = static_cast<int>(std::round(cfg.rsrp_sample_period_ms / dt));

  RunResult out;
  EpisodeLog& log = out.log;

  UeMobility mob(scenario.trajectory, Rng(Rng::mix(run_seed, kStreamJitter)));

  std::vector<PowerController> controllers;
  std::vector<RsrpWindow> windows;
  std::vector<Rng> link_rngs;
  controllers.reserve(n);
  for (int i = 0; i < n; ++i) {
    controllers.emplace_back(gnbs[i].tx_power_initial, cfg.power);
    windows.emplace_back(cfg.channel.avg_window);
    link_rngs.emplace_back(Rng::mix(run_seed, kStreamLinkBase + static_cast<std::uint64_t>(gnbs[i].id)));
  }

  // Initial attachment: strongest expected RSRP at the start position.
  int serving_idx = 0;
  {
    double best = -1e300;
    for (int i = 0; i < n; ++i) {
      const double d = std::hypot(gnbs[i].x - mob.x(), gnbs[i].y - mob.y());
      const double rx = expected_received_power(gnbs[i].tx_power_initial, d, cfg.channel);
      if (rx > best) {
        best = rx;
        serving_idx = i;
      }
    }
  }

  ChoStateMachine cho(cfg.cho, gnbs[serving_idx].id);
  RlfMonitor monitor(cfg.rlf);
  RewardTracker tracker(cfg.reward, cfg.power.boost_ms);

  RsrpMap smoothed;
  bool reattach_pending = false;
  bool have_pending = false;
  Transition pending;
  double accum_reward = 0.0;
  int agent_boost_idx = -1;
  double agent_boost_t = -1e18;
  double last_ho_t = -1e18;
  int last_ho_from = -1;

  auto make_state = [&](int s_idx) {
    RawFeatures f;
    f.rsrp_serv_dbm = smoothed.at(gnbs[s_idx].id);
    const auto targ = best_neighbor(smoothed, gnbs[s_idx].id);
    f.rsrp_targ_dbm = targ ? smoothed.at(*targ) : f.rsrp_serv_dbm;
    f.ue_speed_mps = mob.speed();
    f.t_exec_ms = cfg.cho.t_exec_ms;
    f.t_prep_ms = cfg.cho.t_prep_ms;
    f.o_exec_db = cfg.cho.o_exec_db;
    f.o_prep_db = cfg.cho.o_prep_db;
    f.t310_ms = cfg.rlf.t310_ms;
    f.n310 = static_cast<double>(cfg.rlf.n310);
    f.rsrp_rlf_dbm = cfg.rlf.s_rlf_dbm;
    return normalize(f);
  };

  for (long tick = 1;; ++tick) {
    const long t_ms = static_cast<long>(std::llround(tick * dt));
    const bool alive = mob.advance(dt);
    TickFacts facts;

    // Boost leases expire before this tick's measurements.
    for (int i = 0; i < n; ++i) {
      if (controllers[i].tick(dt) == ReversionEvent::Reverted) {
        log.emit(t_ms, "boost_reverted",
                 {{"gnb", gnbs[i].id}, {"power_dbm", controllers[i].current_power()}});
        if (i == agent_boost_idx) {
          facts.agent_boost_reverted = true;
          agent_boost_idx = -1;
        }
      }
    }

    // Channel: raw samples every stride ticks, smoothed via per-link windows.
    const bool push_now = (tick - 1) % stride == 0;
    for (int i = 0; i < n; ++i) {
      const double d = std::hypot(gnbs[i].x - mob.x(), gnbs[i].y - mob.y());
      double value;
      if (push_now || windows[i].size() == 0) {
        const double raw =
            received_power(controllers[i].current_power(), d, link_rngs[i], cfg.channel);
        if (!std::isfinite(raw))
          throw std::runtime_error("non-finite RSRP at tick " + std::to_string(tick));
        value = windows[i].push_and_average(raw);
      } else {
        value = windows[i].average();
      }
      smoothed[gnbs[i].id] = value;
    }

    // Reestablishment lands on the tick after an RLF: attach to the
    // strongest cell as seen by the fresh windows.
    if (reattach_pending) {
      int best = 0;
      for (int i = 1; i < n; ++i)
        if (smoothed.at(gnbs[i].id) > smoothed.at(gnbs[best].id)) best = i;
      serving_idx = best;
      cho.reattach(gnbs[best].id);
      log.emit(t_ms, "reestablished", {{"gnb", gnbs[best].id}});
      reattach_pending = false;
    }

    const int serving_id = gnbs[serving_idx].id;
    const double serving_rsrp = smoothed.at(serving_id);
    const auto obs = monitor.observe(serving_rsrp, dt);
    facts.indication = obs.indication;
    if (obs.indication == SyncIndication::InSync)
      log.emit(t_ms, "in_sync", {{"rsrp", serving_rsrp}, {"serving_gnb", serving_id}});
    else if (obs.indication == SyncIndication::OutOfSync)
      log.emit(t_ms, "out_of_sync", {{"rsrp", serving_rsrp}, {"serving_gnb", serving_id}});
    if (obs.t310_started) log.emit(t_ms, "t310_started", {{"serving_gnb", serving_id}});
    if (obs.t310_stopped) log.emit(t_ms, "t310_stopped", {{"serving_gnb", serving_id}});

    if (obs.rlf_declared) {
      facts.rlf_declared = true;
      log.emit(t_ms, "rlf", {{"serving_gnb", serving_id}, {"rsrp", serving_rsrp}});
      const ChoPhase phase = cho.phase();
      const int target = cho.target();
      if (cho.on_rlf() == HandoverOutcome::HandoverFailure) {
        log.emit(t_ms, "handover_failure",
                 {{"serving_gnb", serving_id},
                  {"target", target},
                  {"phase", phase == ChoPhase::Preparing ? "preparing" : "executing"}});
      }
      for (auto& w : windows) w.reset();
      monitor.reset();
      reattach_pending = true;
    } else {
      if (policy != nullptr && obs.indication == SyncIndication::OutOfSync) {
        const StateVector state = make_state(serving_idx);
        if (have_pending) {
          pending.reward = accum_reward;
          pending.s_next = state;
          pending.done = false;
          policy->record(pending);
          out.transitions.push_back(pending);
        }
        const int action = policy->decide(state);
        tracker.note_action(action);
        log.emit(t_ms, "action", {{"action", action}, {"serving_gnb", serving_id}});
        ++out.decision_count;
        pending = Transition{state, action, 0.0, {}, false};
        have_pending = true;
        accum_reward = 0.0;
        if (action == 0) {
          if (controllers[serving_idx].request_boost() == BoostResult::Applied) {
            log.emit(t_ms, "boost_applied",
                     {{"gnb", serving_id}, {"power_dbm", controllers[serving_idx].current_power()}});
            facts.action0_applied = true;
            agent_boost_idx = serving_idx;
            agent_boost_t = static_cast<double>(t_ms);
          } else {
            log.emit(t_ms, "boost_suppressed", {{"gnb", serving_id}});
            facts.action0_suppressed = true;
          }
        }
      }

      const ChoEvent ev = cho.step(smoothed, dt);
      switch (ev.kind) {
        case ChoEventKind::PrepStarted:
          log.emit(t_ms, "prep_started", {{"target", ev.target}});
          break;
        case ChoEventKind::PrepAborted:
          log.emit(t_ms, "prep_aborted", {{"target", ev.target}});
          break;
        case ChoEventKind::ExecStarted:
          log.emit(t_ms, "exec_started", {{"target", ev.target}});
          break;
        case ChoEventKind::ExecAborted:
          log.emit(t_ms, "exec_aborted", {{"target", ev.target}});
          break;
        case ChoEventKind::HandoverComplete: {
          const bool ping_pong =
              ev.target == last_ho_from && t_ms - last_ho_t <= cfg.ping_pong_window_ms;
          log.emit(t_ms, "handover_complete",
                   {{"from", ev.previous_serving}, {"to", ev.target}, {"ping_pong", ping_pong}});
          last_ho_t = static_cast<double>(t_ms);
          last_ho_from = ev.previous_serving;
          serving_idx = index_of(gnbs, ev.target);
          for (auto& w : windows) w.reset();
          monitor.reset();
          facts.handover_complete = true;
          break;
        }
        case ChoEventKind::None:
          break;
      }
    }

    if (policy != nullptr) {
      if (agent_boost_t > -1e18 && t_ms - agent_boost_t < cfg.reward.sinr_window_ms) {
        const auto probes = build_probe_set(gnbs, gnbs[serving_idx].id, cfg.reward);
        std::vector<double> powers(n);
        for (int i = 0; i < n; ++i) powers[i] = controllers[i].current_power();
        facts.sinr_delta_db = sinr_penalty_delta(probes, gnbs, powers, cfg.channel, cfg.reward);
      }
      const RewardEventSet es = tracker.attribute_outcomes(facts, static_cast<double>(t_ms));
      const double r = compute_reward(es);
      if (r != 0.0) {
        EpisodeLog::Record payload;
        payload["total"] = r;
        if (es.handover_success_attributed) payload["handover_success"] = true;
        if (es.rlf_after_action0) payload["rlf_after_action0"] = true;
        if (es.rlf_after_action1) payload["rlf_after_action1"] = true;
        if (es.recovery_after_boost) payload["recovery_after_boost"] = true;
        if (es.boost_no_recovery) payload["boost_no_recovery"] = true;
        if (es.suppressed_action0) payload["suppressed"] = true;
        if (es.sinr_delta_db > 0.0) payload["sinr_delta_db"] = es.sinr_delta_db;
        log.emit(t_ms, "reward", std::move(payload));
      }
      accum_reward += r;
      out.total_reward += r;
    }

    if (!alive) {
      if (policy != nullptr && have_pending) {
        pending.reward = accum_reward;
        pending.s_next = make_state(serving_idx);
        pending.done = true;
        policy->record(pending);
        out.transitions.push_back(pending);
        have_pending = false;
      }
      log.emit(t_ms, "episode_end", {{"serving_gnb", gnbs[serving_idx].id}});
      break;
    }
  }

  out.metrics = metrics_from_log(log);
  return out;
}

TrainResult train(const RunConfig& cfg, DqnAgent& agent,
                  const std::function<void(const EpisodeCurvePoint&)>& on_episode) {
  RunConfig base = cfg;
  base.mode = SimMode::ChoDrlTraining;
  base.scenario.kind = ScenarioKind::Training;
  base.validate();
  agent.set_mode(DqnAgent::Mode::Training);

  TrainResult result;
  result.last_good_checkpoint = agent.serialize();

  for (int ep = 1; ep <= cfg.training.episodes; ++ep) {
    const std::uint64_t ep_seed = Rng::mix(cfg.seed, 0xE9150000ULL + static_cast<std::uint64_t>(ep));

    RunConfig ep_cfg = base;
    Rng grid(Rng::mix(ep_seed, kStreamGrid));
    const auto& tr = cfg.training;
    auto pick = [&grid](const std::vector<double>& v) {
      return v[static_cast<std::size_t>(grid.uniform_int(0, static_cast<int>(v.size()) - 1))];
    };
    ep_cfg.cho.o_prep_db = pick(tr.o_prep_options);
    ep_cfg.cho.o_exec_db = pick(tr.o_exec_options);
    ep_cfg.cho.t_prep_ms = pick(tr.t_prep_options);
    ep_cfg.cho.t_exec_ms = pick(tr.t_exec_options);
    ep_cfg.rlf.t310_ms = pick(tr.t310_options);
    ep_cfg.rlf.n310 =
        tr.n310_options[static_cast<std::size_t>(grid.uniform_int(0, static_cast<int>(tr.n310_options.size()) - 1))];
    const double band = cfg.rlf.q_in_dbm - cfg.rlf.s_rlf_dbm;  // preserved under sampling
    ep_cfg.rlf.s_rlf_dbm = pick(tr.s_rlf_options);
    ep_cfg.rlf.q_in_dbm = ep_cfg.rlf.s_rlf_dbm + band;

    const Scenario scenario = build_scenario(ep_cfg, ep_seed);

    EpisodeCurvePoint point;
    point.episode = ep;
    try {
      const RunResult r = run_episode(ep_cfg, scenario, &agent, ep_seed);
      point.reward = r.total_reward;
      point.mean_loss = agent.mean_episode_loss();
      point.epsilon = agent.epsilon();
      point.rlf_count = r.metrics.rlf_count;
      point.hf_count = r.metrics.hf_count;
    } catch (const std::runtime_error& e) {
      result.abort_reason = "episode " + std::to_string(ep) + ": " + e.what();
      return result;
    }
    agent.reset_episode_stats();
    result.curves.push_back(point);
    result.last_good_checkpoint = agent.serialize();
    if (on_episode) on_episode(point);
  }
  return result;
}

RunResult run_greedy_baseline(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.mode = SimMode::GreedyBaseline;
  return run_episode(c, nullptr);
}

std::vector<HeatmapCell> rsrp_heatmap(const RunConfig& cfg) {
  const Scenario scenario = build_scenario(cfg, cfg.seed);
  std::vector<HeatmapCell> cells;
  const double res = cfg.heatmap_res_m;
  const long nx = static_cast<long>(std::floor(cfg.area_x_m / res)) + 1;
  const long ny = static_cast<long>(std::floor(cfg.area_y_m / res)) + 1;
  cells.reserve(static_cast<std::size_t>(nx * ny));
  for (long iy = 0; iy < ny; ++iy) {
    for (long ix = 0; ix < nx; ++ix) {
      HeatmapCell c;
      c.x = ix * res;
      c.y = iy * res;
      double best = -1e300;
      for (const auto& g : scenario.gnbs) {
        const double d = std::hypot(g.x - c.x, g.y - c.y);
        best = std::max(best, expected_received_power(g.tx_power_initial, d, cfg.channel));
      }
      c.rsrp_dbm = best;
      cells.push_back(c);
    }
  }
  return cells;
}

}  // namespace chosim
