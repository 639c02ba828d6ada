#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chosim/channel.hpp"
#include "chosim/cho.hpp"
#include "chosim/dqn_agent.hpp"
#include "chosim/event_log.hpp"
#include "chosim/power_control.hpp"
#include "chosim/reward.hpp"
#include "chosim/rlf.hpp"
#include "chosim/topology.hpp"

namespace chosim {

enum class SimMode { Cho, ChoDrlTrained, ChoDrlTraining, GreedyBaseline };

std::string to_string(SimMode mode);
SimMode sim_mode_from_string(const std::string& s);

enum class ScenarioKind { Training, Test, Custom };

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Test;
  double ue_path_y_m = 250.0;
  double ue_speed_kmh = 40.0;
  double gnb_tx_power_dbm = 33.0;
  double gnb_tx_power_max_dbm = 38.5;
  // Custom gNB list; used when kind == Custom (trajectory follows the test
  // layout: straight line across the service area at ue_path_y_m).
  std::vector<GnbConfig> custom_gnbs;
};

// Per-episode option grids sampled during training.
struct TrainingOptions {
  int episodes = 2000;
  double base_speed_kmh_lo = 35.0;
  double base_speed_kmh_hi = 45.0;
  double speed_scale_lo = 0.8;
  double speed_scale_hi = 1.2;
  std::vector<double> o_prep_options = {1, 2, 4};
  std::vector<double> o_exec_options = {2, 4, 6, 8};
  std::vector<double> t_prep_options = {40, 60, 80, 100};
  std::vector<double> t_exec_options = {40, 60, 80, 100};
  std::vector<double> t310_options = {600, 800, 1000, 1200};
  std::vector<int> n310_options = {3, 5, 6, 8};
  std::vector<double> s_rlf_options = {-70, -67.5, -65};
};

struct RunConfig {
  ScenarioSpec scenario;
  ChannelParams channel;
  ChoParams cho;
  RlfParams rlf;
  PowerParams power;
  RewardParams reward;
  AgentHyperparams agent;
  TrainingOptions training;
  double dt_ms = 20.0;
  double rsrp_sample_period_ms = 20.0;
  double ping_pong_window_ms = 1000.0;
  double area_x_m = 3000.0;
  double area_y_m = 500.0;
  double heatmap_res_m = 10.0;
  SimMode mode = SimMode::Cho;
  std::uint64_t seed = 1;

  // dt must divide the timer windows; throws std::invalid_argument otherwise.
  void validate() const;
};

struct RunResult {
  RunMetrics metrics;
  EpisodeLog log;
  std::vector<Transition> transitions;
  double total_reward = 0.0;
  int decision_count = 0;
};

// Runs one episode: builds the scenario from cfg (seeded by cfg.seed) and
// drives the tick pipeline: mobility, channel, RLF monitor, agent, power
// control, CHO, reward. policy may be null (plain CHO / greedy baseline).
RunResult run_episode(const RunConfig& cfg, ActionPolicy* policy = nullptr);

// Same, with an explicit scenario and seed (used by the training loop).
RunResult run_episode(const RunConfig& cfg, const Scenario& scenario, ActionPolicy* policy,
                      std::uint64_t run_seed);

struct EpisodeCurvePoint {
  int episode = 0;
  double reward = 0.0;
  double mean_loss = 0.0;
  double epsilon = 0.0;
  int rlf_count = 0;
  int hf_count = 0;
};

struct TrainResult {
  std::vector<EpisodeCurvePoint> curves;
  // Last checkpoint that finished an episode with a finite loss; written
  // out when a later episode diverges.
  std::vector<std::uint8_t> last_good_checkpoint;
  // Empty on success; otherwise why training stopped early.
  std::string abort_reason;
};

// 2000-episode (by default) randomized 2-gNB training per the option grids;
// mutates the agent in place. Throws on divergent loss, with
// last_good_checkpoint recoverable via the on_episode callback's capture.
TrainResult train(const RunConfig& cfg, DqnAgent& agent,
                  const std::function<void(const EpisodeCurvePoint&)>& on_episode = {});

// CHO with the target pinned to the instantaneous strongest neighbor and no
// power control; the comparison stand-in for dynamic BS selection.
RunResult run_greedy_baseline(const RunConfig& cfg);

struct HeatmapCell {
  double x = 0.0, y = 0.0, rsrp_dbm = 0.0;
};

// Max-over-gNBs expected RSRP (fading disabled) over the service-area
// lattice at cfg.heatmap_res_m resolution.
std::vector<HeatmapCell> rsrp_heatmap(const RunConfig& cfg);

// Scenario for cfg: the fixed test layout, a seeded training draw, or the
// custom gNB list.
Scenario build_scenario(const RunConfig& cfg, std::uint64_t seed);

}  // namespace chosim
