#pragma once

namespace chosim {

struct RlfParams {
  int n310 = 6;
  double t310_ms = 1000.0;
  double s_rlf_dbm = -67.5;  // out-of-sync threshold
  double q_in_dbm = -67.5;   // in-sync threshold; equal to s_rlf by default
};

// Per-sample link-quality indication relative to S_RLF / Q_in. With the
// default q_in == s_rlf every sample is one of the two; a configured
// q_in > s_rlf opens a dead band that yields None.
enum class SyncIndication { None, InSync, OutOfSync };

// What one observation produced. Several things can coincide on the same
// tick (the N310-th out-of-sync sample both reports OutOfSync and starts
// T310), so this is a flag set rather than a single enum value.
struct SyncObservation {
  SyncIndication indication = SyncIndication::None;
  bool t310_started = false;
  bool t310_stopped = false;
  bool rlf_declared = false;
};

struct RlfState {
  int consecutive_oos = 0;
  bool t310_running = false;
  double t310_elapsed_ms = 0.0;
  bool rlf_declared = false;
};

// Radio-link-failure state machine. Counts consecutive out-of-sync samples,
// starts T310 at the N310-th, stops it on the first in-sync sample, and
// declares RLF when T310 reaches expiry. Callers must reset() after an RLF
// before observing again.
class RlfMonitor {
 public:
  explicit RlfMonitor(const RlfParams& p) : params_(p) {}

  SyncObservation observe(double smoothed_rsrp_dbm, double dt_ms);
  void reset() { state_ = RlfState{}; }

  const RlfState& state() const { return state_; }
  const RlfParams& params() const { return params_; }
  void set_params(const RlfParams& p) { params_ = p; }

 private:
  RlfParams params_;
  RlfState state_;
};

}  // namespace chosim
