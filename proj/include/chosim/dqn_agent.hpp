#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "chosim/mlp.hpp"
#include "chosim/rng.hpp"

namespace chosim {

inline constexpr int kStateDim = 10;

// Normalized agent input, all components in [0, 1].
using StateVector = std::array<double, kStateDim>;

// Raw observation, ordered as the state vector: link measurements, UE
// speed, the active handover timers/offsets and RLF parameters.
struct RawFeatures {
  double rsrp_serv_dbm = 0.0;
  double rsrp_targ_dbm = 0.0;
  double ue_speed_mps = 0.0;
  double t_exec_ms = 0.0;
  double t_prep_ms = 0.0;
  double o_exec_db = 0.0;
  double o_prep_db = 0.0;
  double t310_ms = 0.0;
  double n310 = 0.0;
  double rsrp_rlf_dbm = 0.0;
};

// Min-max bounds for normalization; values outside are clamped.
struct FeatureBounds {
  double rsrp_lo = -120.0, rsrp_hi = -30.0;  // dBm
  double speed_lo = 0.0, speed_hi = 30.0;    // m/s
  double timer_lo = 0.0, timer_hi = 2000.0;  // ms
  double offset_lo = 0.0, offset_hi = 10.0;  // dB
  double n310_lo = 0.0, n310_hi = 10.0;
};

StateVector normalize(const RawFeatures& raw, const FeatureBounds& b = {});

struct Transition {
  StateVector s{};
  int action = 0;
  double reward = 0.0;
  StateVector s_next{};
  bool done = false;
};

// FIFO ring buffer of transitions.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(const Transition& t);
  const Transition& sample(Rng& rng) const;
  std::size_t size() const { return buf_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return buf_[(head_ + i) % buf_.size()]; }

 private:
  std::size_t capacity_;
  std::vector<Transition> buf_;
  std::size_t head_ = 0;  // oldest element once full
};

struct AgentHyperparams {
  double gamma = 0.95;
  double eps_start = 1.0;
  double eps_end = 0.01;
  double tau_eps = 5000.0;
  int batch = 64;
  int n_start = 50;      // steps before training begins
  int c_target = 100;    // target sync period, steps
  double g_max = 10.0;   // global gradient-norm clip
  double huber_delta = 1.0;
  std::size_t buffer_capacity = 10000;
  AdamParams adam;
};

// eps_end + (eps_start - eps_end) * exp(-steps / tau).
double epsilon_schedule(double steps_done, const AgentHyperparams& h);

// err^2/2 for |err| <= delta, else delta * (|err| - delta/2).
double huber(double err, double delta = 1.0);
double huber_grad(double err, double delta = 1.0);

// y = r + gamma * (1 - done) * Q_target(s', argmax_a' Q_policy(s', a')).
double ddqn_target(double reward, const StateVector& s_next, bool done, const Mlp& policy,
                   const Mlp& target, double gamma);

// Decision source plugged into the simulator; invoked on out-of-sync ticks.
class ActionPolicy {
 public:
  virtual ~ActionPolicy() = default;
  virtual int decide(const StateVector& s) = 0;
  // Called when the pending transition closes (next decision or episode end).
  virtual void record(const Transition& t) { (void)t; }
  virtual double mean_episode_loss() const { return 0.0; }
  virtual void reset_episode_stats() {}
};

// Always returns the same action; the do-nothing (action 1) variant makes
// an agent-mode run behaviorally identical to the plain CHO baseline.
class ConstantPolicy : public ActionPolicy {
 public:
  explicit ConstantPolicy(int action) : action_(action) {}
  int decide(const StateVector&) override { return action_; }

 private:
  int action_;
};

// Double-DQN learner over a policy/target pair of MLPs, with uniform
// replay, epsilon-greedy exploration annealed per decision step, Huber
// loss, global-norm gradient clipping and Adam.
class DqnAgent : public ActionPolicy {
 public:
  enum class Mode { Training, Frozen };

  DqnAgent(const std::vector<int>& dims, const AgentHyperparams& h, std::uint64_t seed);

  int decide(const StateVector& s) override;
  void record(const Transition& t) override;
  double mean_episode_loss() const override;
  void reset_episode_stats() override;

  // One minibatch update of the policy network; returns the loss.
  double train_step();
  void sync_target();

  int select_action(const StateVector& s, double eps);
  double epsilon() const { return epsilon_schedule(static_cast<double>(steps_done_), hyper_); }
  std::vector<double> q_values(const StateVector& s) const;
  int greedy_action(const StateVector& s) const;

  std::vector<std::uint8_t> serialize() const;
  static DqnAgent deserialize(const std::vector<std::uint8_t>& bytes, const AgentHyperparams& h,
                              std::uint64_t seed);
  void save(const std::string& path) const;
  // expect_dims, when nonempty, rejects checkpoints with other layer sizes.
  static DqnAgent load(const std::string& path, const AgentHyperparams& h, std::uint64_t seed,
                       const std::vector<int>& expect_dims = {});

  void set_mode(Mode m) { mode_ = m; }
  Mode mode() const { return mode_; }
  std::uint64_t steps_done() const { return steps_done_; }
  ReplayBuffer& buffer() { return buffer_; }
  const Mlp& policy_net() const { return policy_; }
  const Mlp& target_net() const { return target_; }
  Mlp& mutable_policy_net() { return policy_; }
  const AgentHyperparams& hyper() const { return hyper_; }

 private:
  AgentHyperparams hyper_;
  Mlp policy_;
  Mlp target_;
  AdamState adam_;
  ReplayBuffer buffer_;
  Rng rng_;
  std::uint64_t steps_done_ = 0;
  Mode mode_ = Mode::Training;

  double loss_sum_ = 0.0;
  std::uint64_t loss_count_ = 0;

  // train-step scratch, kept across calls
  Grads grads_;
  Mlp::Workspace ws_;
};

}  // namespace chosim
