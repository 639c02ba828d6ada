#pragma once

#include <map>
#include <optional>

namespace chosim {

struct ChoParams {
  double t_prep_ms = 100.0;
  double t_exec_ms = 80.0;
  double o_prep_db = 1.0;
  double o_exec_db = 6.0;
};

enum class ChoPhase { Idle, Preparing, Executing };

enum class ChoEventKind {
  None,
  PrepStarted,
  PrepAborted,
  ExecStarted,
  ExecAborted,
  HandoverComplete,
};

struct ChoEvent {
  ChoEventKind kind = ChoEventKind::None;
  int target = -1;
  int previous_serving = -1;  // set on HandoverComplete
};

enum class HandoverOutcome { HandoverFailure, RlfOnly };

// Smoothed RSRP per gNB id, as seen this tick.
using RsrpMap = std::map<int, double>;

// argmax of smoothed RSRP over non-serving gNBs; ties go to the lowest id.
std::optional<int> best_neighbor(const RsrpMap& rsrp, int serving);

// Conditional-handover state machine. Preparation requires the best
// neighbor to beat the serving cell by o_prep at every tick for t_prep;
// execution then requires o_exec for t_exec the same way. Any violating
// tick aborts to Idle, as does the best candidate changing mid-preparation.
class ChoStateMachine {
 public:
  ChoStateMachine(const ChoParams& p, int serving) : params_(p), serving_(serving) {}

  ChoEvent step(const RsrpMap& rsrp, double dt_ms);

  // Call when an RLF was declared this tick. HF iff a handover phase was
  // active; either way the machine resets to Idle.
  HandoverOutcome on_rlf();

  ChoPhase phase() const { return phase_; }
  int serving() const { return serving_; }
  int target() const { return target_; }
  double elapsed_ms() const { return elapsed_ms_; }
  const ChoParams& params() const { return params_; }
  void set_params(const ChoParams& p) { params_ = p; }

  // Reestablishment after RLF attaches to a new cell with a clean state.
  void reattach(int serving) {
    serving_ = serving;
    phase_ = ChoPhase::Idle;
    target_ = -1;
    elapsed_ms_ = 0.0;
  }

 private:
  ChoParams params_;
  int serving_;
  ChoPhase phase_ = ChoPhase::Idle;
  int target_ = -1;
  double elapsed_ms_ = 0.0;
};

}  // namespace chosim
