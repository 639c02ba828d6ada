#include "chosim/mlp.hpp"

#include <cmath>
#include <cstring>

namespace chosim {

void Grads::zero() {
  for (auto& layer : w) std::memset(layer.data(), 0, layer.size() * sizeof(double));
  for (auto& layer : b) std::memset(layer.data(), 0, layer.size() * sizeof(double));
}

Mlp Mlp::create(const std::vector<int>& dims, Rng& rng) {
  Mlp net;
  net.dims = dims;
  net.w.resize(dims.size() - 1);
  net.b.resize(dims.size() - 1);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    net.w[l].resize(static_cast<std::size_t>(fan_in) * fan_out);
    for (auto& v : net.w[l]) v = rng.uniform(-bound, bound);
    net.b[l].assign(fan_out, 0.0);
  }
  return net;
}

std::size_t Mlp::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < w.size(); ++l) n += w[l].size() + b[l].size();
  return n;
}

std::vector<double> Mlp::forward(const std::vector<double>& x) const {
  std::vector<double> cur = x;
  std::vector<double> next;
  for (std::size_t l = 0; l < w.size(); ++l) {
    const int in = dims[l];
    const int out = dims[l + 1];
    next.assign(out, 0.0);
    const double* W = w[l].data();
    for (int o = 0; o < out; ++o) {
      const double* row = W + static_cast<std::size_t>(o) * in;
      double acc = b[l][o];
      for (int i = 0; i < in; ++i) acc += row[i] * cur[i];
      next[o] = (l + 1 < w.size() && acc < 0.0) ? 0.0 : acc;  // ReLU on hidden layers
    }
    cur.swap(next);
  }
  return cur;
}

const std::vector<double>& Mlp::forward_cached(const std::vector<double>& x, Workspace& ws) const {
  ws.act.resize(w.size() + 1);
  ws.act[0] = x;
  for (std::size_t l = 0; l < w.size(); ++l) {
    const int in = dims[l];
    const int out = dims[l + 1];
    auto& dst = ws.act[l + 1];
    dst.assign(out, 0.0);
    const double* W = w[l].data();
    const double* src = ws.act[l].data();
    const bool hidden = l + 1 < w.size();
    for (int o = 0; o < out; ++o) {
      const double* row = W + static_cast<std::size_t>(o) * in;
      double acc = b[l][o];
      for (int i = 0; i < in; ++i) acc += row[i] * src[i];
      dst[o] = (hidden && acc < 0.0) ? 0.0 : acc;
    }
  }
  return ws.act.back();
}

void Mlp::backward(const Workspace& ws, const std::vector<double>& dLdy, Grads& g) const {
  std::vector<double> delta = dLdy;
  std::vector<double> delta_prev;
  for (std::size_t l = w.size(); l-- > 0;) {
    const int in = dims[l];
    const int out = dims[l + 1];
    const double* src = ws.act[l].data();
    double* gw = g.w[l].data();
    double* gb = g.b[l].data();
    const double* W = w[l].data();
    if (l > 0) delta_prev.assign(in, 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      double* grow = gw + static_cast<std::size_t>(o) * in;
      const double* wrow = W + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) grow[i] += d * src[i];
      gb[o] += d;
      if (l > 0)
        for (int i = 0; i < in; ++i) delta_prev[i] += d * wrow[i];
    }
    if (l > 0) {
      // ReLU gate: activations are zero exactly where the unit was clamped.
      const double* act = ws.act[l].data();
      for (int i = 0; i < in; ++i)
        if (act[i] <= 0.0) delta_prev[i] = 0.0;
      delta.swap(delta_prev);
    }
  }
}

Grads Mlp::make_grads() const {
  Grads g;
  g.w.resize(w.size());
  g.b.resize(b.size());
  for (std::size_t l = 0; l < w.size(); ++l) {
    g.w[l].assign(w[l].size(), 0.0);
    g.b[l].assign(b[l].size(), 0.0);
  }
  return g;
}

double global_norm(const Grads& g) {
  double sq = 0.0;
  for (const auto& layer : g.w)
    for (double v : layer) sq += v * v;
  for (const auto& layer : g.b)
    for (double v : layer) sq += v * v;
  return std::sqrt(sq);
}

void clip_global_norm(Grads& g, double max_norm) {
  const double norm = global_norm(g);
  if (norm <= max_norm || norm == 0.0) return;
  const double scale = max_norm / norm;
  for (auto& layer : g.w)
    for (double& v : layer) v *= scale;
  for (auto& layer : g.b)
    for (double& v : layer) v *= scale;
}

AdamState AdamState::for_net(const Mlp& net) {
  AdamState st;
  st.m_w.resize(net.w.size());
  st.v_w.resize(net.w.size());
  st.m_b.resize(net.b.size());
  st.v_b.resize(net.b.size());
  for (std::size_t l = 0; l < net.w.size(); ++l) {
    st.m_w[l].assign(net.w[l].size(), 0.0);
    st.v_w[l].assign(net.w[l].size(), 0.0);
    st.m_b[l].assign(net.b[l].size(), 0.0);
    st.v_b[l].assign(net.b[l].size(), 0.0);
  }
  return st;
}

namespace {
void adam_apply(std::vector<double>& param, const std::vector<double>& grad,
                std::vector<double>& m, std::vector<double>& v, const AdamParams& p,
                double bc1, double bc2) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = p.beta1 * m[i] + (1.0 - p.beta1) * grad[i];
    v[i] = p.beta2 * v[i] + (1.0 - p.beta2) * grad[i] * grad[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    param[i] -= p.lr * mhat / (std::sqrt(vhat) + p.eps);
  }
}
}  // namespace

void adam_update(Mlp& net, const Grads& g, AdamState& st, const AdamParams& p) {
  ++st.t;
  const double bc1 = 1.0 - std::pow(p.beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(p.beta2, static_cast<double>(st.t));
  for (std::size_t l = 0; l < net.w.size(); ++l) {
    adam_apply(net.w[l], g.w[l], st.m_w[l], st.v_w[l], p, bc1, bc2);
    adam_apply(net.b[l], g.b[l], st.m_b[l], st.v_b[l], p, bc1, bc2);
  }
}

}  // namespace chosim
