#pragma once

// Finite-difference gradient oracle for the DQN training loss. Used by both
// the unit suite and the acceptance suite; lives in test code only.

#include <cmath>
#include <vector>

#include "chosim/dqn_agent.hpp"
#include "chosim/mlp.hpp"

namespace chosim::testing {

// Training loss with the targets held fixed (no gradient flows through the
// DDQN target in a train step, so the oracle freezes y the same way):
// L = (1/B) sum_j huber(Q(s_j, a_j) - y_j).
inline double loss_given_targets(const Mlp& net, const std::vector<Transition>& batch,
                                 const std::vector<double>& y, double delta) {
  double sum = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto q = net.forward(std::vector<double>(batch[j].s.begin(), batch[j].s.end()));
    sum += huber(q[batch[j].action] - y[j], delta);
  }
  return sum / static_cast<double>(batch.size());
}

// Analytic gradient of the same loss via the hand-written backward pass.
inline Grads analytic_gradient(const Mlp& net, const std::vector<Transition>& batch,
                               const std::vector<double>& y, double delta) {
  Grads g = net.make_grads();
  Mlp::Workspace ws;
  std::vector<double> dLdy(net.output_dim(), 0.0);
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto& q =
        net.forward_cached(std::vector<double>(batch[j].s.begin(), batch[j].s.end()), ws);
    const double err = q[batch[j].action] - y[j];
    std::fill(dLdy.begin(), dLdy.end(), 0.0);
    dLdy[batch[j].action] = huber_grad(err, delta) / static_cast<double>(batch.size());
    net.backward(ws, dLdy, g);
  }
  return g;
}

// Central finite differences over every parameter; returns the max relative
// error against the analytic gradient.
inline double max_gradient_rel_error(Mlp net, const std::vector<Transition>& batch,
                                     const std::vector<double>& y, double delta,
                                     double h = 1e-5) {
  const Grads analytic = analytic_gradient(net, batch, y, delta);
  double worst = 0.0;
  auto check_param = [&](double& p, double g_an) {
    const double saved = p;
    p = saved + h;
    const double up = loss_given_targets(net, batch, y, delta);
    p = saved - h;
    const double down = loss_given_targets(net, batch, y, delta);
    p = saved;
    const double g_fd = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(g_fd), std::abs(g_an), 1.0});
    worst = std::max(worst, std::abs(g_fd - g_an) / denom);
  };
  for (std::size_t l = 0; l < net.w.size(); ++l) {
    for (std::size_t i = 0; i < net.w[l].size(); ++i) check_param(net.w[l][i], analytic.w[l][i]);
    for (std::size_t i = 0; i < net.b[l].size(); ++i) check_param(net.b[l][i], analytic.b[l][i]);
  }
  return worst;
}

// Random batch of transitions with states/targets suited to gradient checks.
inline std::vector<Transition> random_batch(Rng& rng, int count) {
  std::vector<Transition> batch(static_cast<std::size_t>(count));
  for (auto& t : batch) {
    for (auto& v : t.s) v = rng.uniform01();
    for (auto& v : t.s_next) v = rng.uniform01();
    t.action = rng.uniform01() < 0.5 ? 0 : 1;
    t.reward = rng.uniform(-15.0, 15.0);
    t.done = rng.uniform01() < 0.25;
  }
  return batch;
}

}  // namespace chosim::testing
