#pragma once

#include <cstddef>
#include <vector>

#include "chosim/rng.hpp"

namespace chosim {

// Gradient accumulator shaped like an Mlp's parameters.
struct Grads {
  std::vector<std::vector<double>> w;  // [layer][out*in]
  std::vector<std::vector<double>> b;  // [layer][out]
  void zero();
};

// Fully connected network with ReLU hidden layers and a linear output,
// with hand-written forward and backward passes. Weights are row-major
// [out][in] per layer.
struct Mlp {
  std::vector<int> dims;               // e.g. {10, 64, 64, 64, 2}
  std::vector<std::vector<double>> w;  // [layer][out*in]
  std::vector<std::vector<double>> b;  // [layer][out]

  // Uniform +-sqrt(6 / (fan_in + fan_out)) weights, zero biases.
  static Mlp create(const std::vector<int>& dims, Rng& rng);

  int input_dim() const { return dims.front(); }
  int output_dim() const { return dims.back(); }
  std::size_t layer_count() const { return w.size(); }
  std::size_t param_count() const;

  std::vector<double> forward(const std::vector<double>& x) const;

  // Per-layer activations kept for backprop: act[0] is the input, act[l]
  // the post-activation output of layer l (the last layer is linear).
  struct Workspace {
    std::vector<std::vector<double>> act;
  };

  const std::vector<double>& forward_cached(const std::vector<double>& x, Workspace& ws) const;

  // Accumulates dL/dparams into g, given dL/doutput for the cached pass.
  void backward(const Workspace& ws, const std::vector<double>& dLdy, Grads& g) const;

  Grads make_grads() const;
};

double global_norm(const Grads& g);

// Scales gradients so the global L2 norm does not exceed max_norm.
void clip_global_norm(Grads& g, double max_norm);

struct AdamParams {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
  std::uint64_t t = 0;

  static AdamState for_net(const Mlp& net);
};

// One bias-corrected Adam update of net from g.
void adam_update(Mlp& net, const Grads& g, AdamState& st, const AdamParams& p);

}  // namespace chosim
