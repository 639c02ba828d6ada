#include "chosim/cho.hpp"

namespace chosim {

std::optional<int> best_neighbor(const RsrpMap& rsrp, int serving) {
  std::optional<int> best;
  double best_val = 0.0;
  for (const auto& [id, val] : rsrp) {  // map iteration is id-ascending
    if (id == serving) continue;
    if (!best || val > best_val) {
      best = id;
      best_val = val;
    }
  }
  return best;
}

ChoEvent ChoStateMachine::step(const RsrpMap& rsrp, double dt_ms) {
  ChoEvent ev;
  const auto serving_it = rsrp.find(serving_);
  if (serving_it == rsrp.end()) return ev;
  const double p_serving = serving_it->second;

  const auto candidate = best_neighbor(rsrp, serving_);
  if (!candidate) return ev;

  switch (phase_) {
    case ChoPhase::Idle: {
      const double p_target = rsrp.at(*candidate);
      if (p_target > p_serving + params_.o_prep_db) {
        phase_ = ChoPhase::Preparing;
        target_ = *candidate;
        elapsed_ms_ = dt_ms;
        ev.kind = ChoEventKind::PrepStarted;
        ev.target = target_;
        if (elapsed_ms_ >= params_.t_prep_ms) {
          // degenerate t_prep <= dt: preparation completes immediately
          phase_ = ChoPhase::Executing;
          elapsed_ms_ = 0.0;
          ev.kind = ChoEventKind::ExecStarted;
        }
      }
      break;
    }
    case ChoPhase::Preparing: {
      const double p_target = rsrp.count(target_) ? rsrp.at(target_) : -1e300;
      if (*candidate != target_ || p_target <= p_serving + params_.o_prep_db) {
        ev.kind = ChoEventKind::PrepAborted;
        ev.target = target_;
        phase_ = ChoPhase::Idle;
        target_ = -1;
        elapsed_ms_ = 0.0;
        break;
      }
      elapsed_ms_ += dt_ms;
      if (elapsed_ms_ >= params_.t_prep_ms) {
        phase_ = ChoPhase::Executing;
        elapsed_ms_ = 0.0;
        ev.kind = ChoEventKind::ExecStarted;
        ev.target = target_;
      }
      break;
    }
    case ChoPhase::Executing: {
      // The execution condition is evaluated against the prepared target
      // only; other neighbors overtaking it do not abort an execution.
      const double p_target = rsrp.count(target_) ? rsrp.at(target_) : -1e300;
      if (p_target <= p_serving + params_.o_exec_db) {
        ev.kind = ChoEventKind::ExecAborted;
        ev.target = target_;
        phase_ = ChoPhase::Idle;
        target_ = -1;
        elapsed_ms_ = 0.0;
        break;
      }
      elapsed_ms_ += dt_ms;
      if (elapsed_ms_ >= params_.t_exec_ms) {
        ev.kind = ChoEventKind::HandoverComplete;
        ev.target = target_;
        ev.previous_serving = serving_;
        serving_ = target_;
        phase_ = ChoPhase::Idle;
        target_ = -1;
        elapsed_ms_ = 0.0;
      }
      break;
    }
  }
  return ev;
}

HandoverOutcome ChoStateMachine::on_rlf() {
  const bool active = phase_ == ChoPhase::Preparing || phase_ == ChoPhase::Executing;
  phase_ = ChoPhase::Idle;
  target_ = -1;
  elapsed_ms_ = 0.0;
  return active ? HandoverOutcome::HandoverFailure : HandoverOutcome::RlfOnly;
}

}  // namespace chosim
