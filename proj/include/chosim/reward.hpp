#pragma once

#include <vector>

#include "chosim/channel.hpp"
#include "chosim/rlf.hpp"
#include "chosim/topology.hpp"

namespace chosim {

struct RewardParams {
  double sinr_threshold_db = 0.0;
  double noise_dbm = -94.0;        // -174 dBm/Hz over 100 MHz
  double probe_radius_m = 600.0;   // R: neighbors beyond this carry no probe
  double probe_offset_m = 50.0;    // probe sits this far from its gNB, toward serving
  double attribution_extra_ms = 200.0;  // handover credit window = boost_ms + this
  double sinr_window_ms = 40.0;    // penalty window after a boost
};

// Per-tick outcome flags feeding the reward ledger.
struct RewardEventSet {
  bool handover_success_attributed = false;  // +15
  bool rlf_after_action0 = false;            // -15
  bool rlf_after_action1 = false;            // -5
  bool recovery_after_boost = false;         // +5
  bool boost_no_recovery = false;            // -2
  bool suppressed_action0 = false;           // -2
  double sinr_delta_db = 0.0;                // -delta * 300
};

double compute_reward(const RewardEventSet& e);

struct ProbeUe {
  int gnb_id = 0;
  double x = 0.0, y = 0.0;
};

// One static probe per neighboring gNB within probe_radius_m of the serving
// gNB, offset from its own gNB toward the serving one.
std::vector<ProbeUe> build_probe_set(const std::vector<GnbConfig>& gnbs, int serving_id,
                                     const RewardParams& rp);

// Mean probe SINR in dB: per probe, own-gNB received power over the sum of
// all other gNBs' received powers plus noise, in linear mW; probes use the
// deterministic (fading-free) channel. Linear SINRs are averaged, then
// converted to dB. tx_power_dbm holds each gNB's current power by index.
double average_probe_sinr_db(const std::vector<ProbeUe>& probes,
                             const std::vector<GnbConfig>& gnbs,
                             const std::vector<double>& tx_power_dbm,
                             const ChannelParams& ch, const RewardParams& rp);

// max(0, threshold - average probe SINR); 0 with an empty probe set.
double sinr_penalty_delta(const std::vector<ProbeUe>& probes,
                          const std::vector<GnbConfig>& gnbs,
                          const std::vector<double>& tx_power_dbm,
                          const ChannelParams& ch, const RewardParams& rp);

// Raw per-tick facts the tracker turns into a RewardEventSet.
struct TickFacts {
  SyncIndication indication = SyncIndication::None;
  bool rlf_declared = false;
  bool handover_complete = false;
  bool action0_applied = false;     // the agent's boost was granted this tick
  bool action0_suppressed = false;
  bool agent_boost_reverted = false;  // the agent's own boost reverted this tick
  double sinr_delta_db = 0.0;
};

// Stateful attribution across ticks: remembers the most recent agent
// decision, the lifetime of the agent's last boost, and the previous sync
// indication so in-sync recoveries and failed boosts are credited once.
class RewardTracker {
 public:
  explicit RewardTracker(const RewardParams& rp, double boost_ms)
      : params_(rp), boost_ms_(boost_ms) {}

  void note_action(int action) { last_action_ = action; }

  RewardEventSet attribute_outcomes(const TickFacts& facts, double t_ms);

  int last_action() const { return last_action_; }

 private:
  RewardParams params_;
  double boost_ms_;
  int last_action_ = -1;  // none yet
  double last_boost_applied_ms_ = -1e18;
  bool boost_active_ = false;
  bool saw_insync_during_boost_ = false;
  SyncIndication prev_indication_ = SyncIndication::None;
};

}  // namespace chosim
