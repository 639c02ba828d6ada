#include "chosim/dqn_agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace chosim {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

double minmax(double v, double lo, double hi) { return clamp01((v - lo) / (hi - lo)); }

}  // namespace

StateVector normalize(const RawFeatures& raw, const FeatureBounds& b) {
  return StateVector{
      minmax(raw.rsrp_serv_dbm, b.rsrp_lo, b.rsrp_hi),
      minmax(raw.rsrp_targ_dbm, b.rsrp_lo, b.rsrp_hi),
      minmax(raw.ue_speed_mps, b.speed_lo, b.speed_hi),
      minmax(raw.t_exec_ms, b.timer_lo, b.timer_hi),
      minmax(raw.t_prep_ms, b.timer_lo, b.timer_hi),
      minmax(raw.o_exec_db, b.offset_lo, b.offset_hi),
      minmax(raw.o_prep_db, b.offset_lo, b.offset_hi),
      minmax(raw.t310_ms, b.timer_lo, b.timer_hi),
      minmax(raw.n310, b.n310_lo, b.n310_hi),
      minmax(raw.rsrp_rlf_dbm, b.rsrp_lo, b.rsrp_hi),
  };
}

void ReplayBuffer::push(const Transition& t) {
  if (buf_.size() < capacity_) {
    buf_.push_back(t);
  } else {
    buf_[head_] = t;
    head_ = (head_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::sample(Rng& rng) const {
  return buf_[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(buf_.size()) - 1))];
}

double epsilon_schedule(double steps_done, const AgentHyperparams& h) {
  return h.eps_end + (h.eps_start - h.eps_end) * std::exp(-steps_done / h.tau_eps);
}

double huber(double err, double delta) {
  const double a = std::abs(err);
  return a <= delta ? 0.5 * err * err : delta * (a - 0.5 * delta);
}

double huber_grad(double err, double delta) {
  if (err > delta) return delta;
  if (err < -delta) return -delta;
  return err;
}

double ddqn_target(double reward, const StateVector& s_next, bool done, const Mlp& policy,
                   const Mlp& target, double gamma) {
  if (done) return reward;
  const std::vector<double> x(s_next.begin(), s_next.end());
  const auto q_policy = policy.forward(x);
  std::size_t best = 0;
  for (std::size_t a = 1; a < q_policy.size(); ++a)
    if (q_policy[a] > q_policy[best]) best = a;
  const auto q_target = target.forward(x);
  return reward + gamma * q_target[best];
}

namespace {
Mlp init_net(const std::vector<int>& dims, std::uint64_t seed) {
  Rng init(Rng::mix(seed, 0x51C0FFEEULL));
  return Mlp::create(dims, init);
}
}  // namespace

DqnAgent::DqnAgent(const std::vector<int>& dims, const AgentHyperparams& h, std::uint64_t seed)
    : hyper_(h),
      policy_(init_net(dims, seed)),
      target_(policy_),
      adam_(AdamState::for_net(policy_)),
      buffer_(h.buffer_capacity),
      rng_(Rng::mix(seed, 0xAC71095ULL)) {
  grads_ = policy_.make_grads();
}

int DqnAgent::select_action(const StateVector& s, double eps) {
  if (rng_.uniform01() < eps) return rng_.uniform01() < 0.5 ? 0 : 1;
  return greedy_action(s);
}

int DqnAgent::greedy_action(const StateVector& s) const {
  const auto q = q_values(s);
  // ties go to action 0
  return q[1] > q[0] ? 1 : 0;
}

std::vector<double> DqnAgent::q_values(const StateVector& s) const {
  return policy_.forward(std::vector<double>(s.begin(), s.end()));
}

int DqnAgent::decide(const StateVector& s) {
  if (mode_ == Mode::Frozen) return greedy_action(s);
  ++steps_done_;
  return select_action(s, epsilon());
}

void DqnAgent::record(const Transition& t) {
  if (mode_ == Mode::Frozen) return;
  buffer_.push(t);
  if (steps_done_ > static_cast<std::uint64_t>(hyper_.n_start) &&
      buffer_.size() >= static_cast<std::size_t>(hyper_.batch)) {
    const double loss = train_step();
    loss_sum_ += loss;
    ++loss_count_;
  }
  if (steps_done_ % static_cast<std::uint64_t>(hyper_.c_target) == 0) sync_target();
}

double DqnAgent::mean_episode_loss() const {
  return loss_count_ == 0 ? 0.0 : loss_sum_ / static_cast<double>(loss_count_);
}

void DqnAgent::reset_episode_stats() {
  loss_sum_ = 0.0;
  loss_count_ = 0;
}

double DqnAgent::train_step() {
  if (buffer_.size() == 0) throw std::logic_error("train_step on empty replay buffer");
  const int batch = hyper_.batch;
  grads_.zero();
  double loss_sum = 0.0;
  std::vector<double> x;
  std::vector<double> dLdy(policy_.output_dim(), 0.0);
  for (int j = 0; j < batch; ++j) {
    const Transition& tr = buffer_.sample(rng_);
    const double y = ddqn_target(tr.reward, tr.s_next, tr.done, policy_, target_, hyper_.gamma);
    x.assign(tr.s.begin(), tr.s.end());
    const auto& q = policy_.forward_cached(x, ws_);
    const double err = q[tr.action] - y;
    loss_sum += huber(err, hyper_.huber_delta);
    std::fill(dLdy.begin(), dLdy.end(), 0.0);
    dLdy[tr.action] = huber_grad(err, hyper_.huber_delta) / static_cast<double>(batch);
    policy_.backward(ws_, dLdy, grads_);
  }
  const double loss = loss_sum / static_cast<double>(batch);
  if (!std::isfinite(loss)) throw std::runtime_error("non-finite training loss");
  clip_global_norm(grads_, hyper_.g_max);
  adam_update(policy_, grads_, adam_, hyper_.adam);
  return loss;
}

void DqnAgent::sync_target() { target_ = policy_; }

// ---- checkpoint serialization -------------------------------------------

namespace {

constexpr char kMagic[8] = {'C', 'H', 'O', 'S', 'I', 'M', 'Q', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

void put_block(std::vector<std::uint8_t>& out, const std::vector<std::vector<double>>& block) {
  for (const auto& layer : block)
    for (double v : layer) put_f64(out, v);
}

struct Reader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) throw std::runtime_error("checkpoint truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  void block(std::vector<std::vector<double>>& dst) {
    for (auto& layer : dst)
      for (double& v : layer) v = f64();
  }
};

}  // namespace

std::vector<std::uint8_t> DqnAgent::serialize() const {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 8);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(policy_.dims.size()));
  for (int d : policy_.dims) put_u32(out, static_cast<std::uint32_t>(d));
  put_u64(out, steps_done_);
  put_u64(out, adam_.t);
  put_f64(out, hyper_.adam.lr);
  put_f64(out, hyper_.adam.beta1);
  put_f64(out, hyper_.adam.beta2);
  put_f64(out, hyper_.adam.eps);
  put_block(out, policy_.w);
  put_block(out, policy_.b);
  put_block(out, target_.w);
  put_block(out, target_.b);
  put_block(out, adam_.m_w);
  put_block(out, adam_.v_w);
  put_block(out, adam_.m_b);
  put_block(out, adam_.v_b);
  return out;
}

DqnAgent DqnAgent::deserialize(const std::vector<std::uint8_t>& bytes, const AgentHyperparams& h,
                               std::uint64_t seed) {
  Reader r{bytes};
  r.need(8);
  if (std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw std::runtime_error("not a chosim checkpoint (bad magic)");
  r.pos = 8;
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t ndims = r.u32();
  if (ndims < 2 || ndims > 64) throw std::runtime_error("checkpoint has invalid layer count");
  std::vector<int> dims(ndims);
  for (auto& d : dims) d = static_cast<int>(r.u32());

  AgentHyperparams hp = h;
  DqnAgent agent(dims, hp, seed);
  agent.steps_done_ = r.u64();
  agent.adam_.t = r.u64();
  agent.hyper_.adam.lr = r.f64();
  agent.hyper_.adam.beta1 = r.f64();
  agent.hyper_.adam.beta2 = r.f64();
  agent.hyper_.adam.eps = r.f64();
  r.block(agent.policy_.w);
  r.block(agent.policy_.b);
  r.block(agent.target_.w);
  r.block(agent.target_.b);
  r.block(agent.adam_.m_w);
  r.block(agent.adam_.v_w);
  r.block(agent.adam_.m_b);
  r.block(agent.adam_.v_b);
  return agent;
}

void DqnAgent::save(const std::string& path) const {
  const auto bytes = serialize();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write checkpoint: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("short write on checkpoint: " + path);
}

DqnAgent DqnAgent::load(const std::string& path, const AgentHyperparams& h, std::uint64_t seed,
                        const std::vector<int>& expect_dims) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  DqnAgent agent = deserialize(bytes, h, seed);
  if (!expect_dims.empty() && agent.policy_.dims != expect_dims)
    throw std::runtime_error("checkpoint layer dimensions do not match this network");
  return agent;
}

}  // namespace chosim
