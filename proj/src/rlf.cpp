#include "chosim/rlf.hpp"

#include <cassert>

namespace chosim {

SyncObservation RlfMonitor::observe(double smoothed_rsrp_dbm, double dt_ms) {
  assert(!state_.rlf_declared && "observe() after RLF; callers reset on reestablishment");

  SyncObservation out;
  if (smoothed_rsrp_dbm >= params_.q_in_dbm) {
    out.indication = SyncIndication::InSync;
    state_.consecutive_oos = 0;
    if (state_.t310_running) {
      state_.t310_running = false;
      state_.t310_elapsed_ms = 0.0;
      out.t310_stopped = true;
    }
    return out;
  }

  if (smoothed_rsrp_dbm < params_.s_rlf_dbm) {
    out.indication = SyncIndication::OutOfSync;
    ++state_.consecutive_oos;
    if (!state_.t310_running && state_.consecutive_oos >= params_.n310) {
      state_.t310_running = true;
      state_.t310_elapsed_ms = 0.0;
      out.t310_started = true;
      return out;  // the timer starts at this sample; it elapses from the next
    }
  }
  // Samples in the (s_rlf, q_in) band carry no indication; the out-of-sync
  // chain is broken only by an in-sync indication, and a running T310 keeps
  // elapsing until one arrives.
  if (state_.t310_running) {
    state_.t310_elapsed_ms += dt_ms;
    if (state_.t310_elapsed_ms >= params_.t310_ms) {
      state_.rlf_declared = true;
      out.rlf_declared = true;
    }
  }
  return out;
}

}  // namespace chosim
