#include "chosim/reward.hpp"

#include <algorithm>
#include <cmath>

#include "chosim/power_control.hpp"

namespace chosim {

namespace {
constexpr double kHandoverSuccessReward = 15.0;
constexpr double kRlfAfterBoostPenalty = -15.0;
constexpr double kRlfNoBoostPenalty = -5.0;
constexpr double kRecoveryReward = 5.0;
constexpr double kNoRecoveryPenalty = -2.0;
constexpr double kSuppressedPenalty = -2.0;
constexpr double kSinrPenaltyScale = 300.0;
}  // namespace

double compute_reward(const RewardEventSet& e) {
  double r = 0.0;
  if (e.handover_success_attributed) r += kHandoverSuccessReward;
  if (e.rlf_after_action0) r += kRlfAfterBoostPenalty;
  if (e.rlf_after_action1) r += kRlfNoBoostPenalty;
  if (e.recovery_after_boost) r += kRecoveryReward;
  if (e.boost_no_recovery) r += kNoRecoveryPenalty;
  if (e.suppressed_action0) r += kSuppressedPenalty;
  r -= e.sinr_delta_db * kSinrPenaltyScale;
  return r;
}

std::vector<ProbeUe> build_probe_set(const std::vector<GnbConfig>& gnbs, int serving_id,
                                     const RewardParams& rp) {
  const GnbConfig* serving = nullptr;
  for (const auto& g : gnbs)
    if (g.id == serving_id) serving = &g;
  std::vector<ProbeUe> probes;
  if (serving == nullptr) return probes;
  for (const auto& g : gnbs) {
    if (g.id == serving_id) continue;
    const double d = distance(g, *serving);
    if (d > rp.probe_radius_m) continue;
    ProbeUe p;
    p.gnb_id = g.id;
    if (d > 0.0) {
      p.x = g.x + rp.probe_offset_m * (serving->x - g.x) / d;
      p.y = g.y + rp.probe_offset_m * (serving->y - g.y) / d;
    } else {
      p.x = g.x;
      p.y = g.y;
    }
    probes.push_back(p);
  }
  return probes;
}

double average_probe_sinr_db(const std::vector<ProbeUe>& probes,
                             const std::vector<GnbConfig>& gnbs,
                             const std::vector<double>& tx_power_dbm,
                             const ChannelParams& ch, const RewardParams& rp) {
  double sum_linear = 0.0;
  const double noise_mw = dbm_to_mw(rp.noise_dbm);
  for (const auto& probe : probes) {
    double signal_mw = 0.0;
    double interference_mw = 0.0;
    for (std::size_t i = 0; i < gnbs.size(); ++i) {
      const double d = std::hypot(gnbs[i].x - probe.x, gnbs[i].y - probe.y);
      const double rx = expected_received_power(tx_power_dbm[i], d, ch);
      if (gnbs[i].id == probe.gnb_id)
        signal_mw = dbm_to_mw(rx);
      else
        interference_mw += dbm_to_mw(rx);
    }
    sum_linear += signal_mw / (interference_mw + noise_mw);
  }
  return 10.0 * std::log10(sum_linear / static_cast<double>(probes.size()));
}

double sinr_penalty_delta(const std::vector<ProbeUe>& probes,
                          const std::vector<GnbConfig>& gnbs,
                          const std::vector<double>& tx_power_dbm,
                          const ChannelParams& ch, const RewardParams& rp) {
  if (probes.empty()) return 0.0;
  const double avg = average_probe_sinr_db(probes, gnbs, tx_power_dbm, ch, rp);
  return std::max(0.0, rp.sinr_threshold_db - avg);
}

RewardEventSet RewardTracker::attribute_outcomes(const TickFacts& facts, double t_ms) {
  RewardEventSet e;

  if (facts.action0_applied) {
    boost_active_ = true;
    saw_insync_during_boost_ = false;
    last_boost_applied_ms_ = t_ms;
  }

  if (facts.indication == SyncIndication::InSync) {
    if (boost_active_) {
      if (prev_indication_ == SyncIndication::OutOfSync) e.recovery_after_boost = true;
      saw_insync_during_boost_ = true;
    }
  }

  if (facts.handover_complete &&
      t_ms - last_boost_applied_ms_ <= boost_ms_ + params_.attribution_extra_ms) {
    e.handover_success_attributed = true;
  }

  if (facts.rlf_declared) {
    if (last_action_ == 0) e.rlf_after_action0 = true;
    if (last_action_ == 1) e.rlf_after_action1 = true;
  }

  if (facts.agent_boost_reverted) {
    if (!saw_insync_during_boost_) e.boost_no_recovery = true;
    boost_active_ = false;
  }

  e.suppressed_action0 = facts.action0_suppressed;
  e.sinr_delta_db = facts.sinr_delta_db;

  // A band sample carries no indication and does not end an out-of-sync run.
  if (facts.indication != SyncIndication::None) prev_indication_ = facts.indication;
  return e;
}

}  // namespace chosim
