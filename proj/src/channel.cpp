#include "chosim/channel.hpp"

#include <algorithm>
#include <cmath>

namespace chosim {

double path_loss(double d, const ChannelParams& p) {
  const double dc = std::max(d, p.d0);
  return 10.0 * p.alpha * std::log10(dc / p.d0);
}

double fading_sample(Rng& rng, double d, const ChannelParams& p) {
  const double dc = std::max(d, p.d0);
  const double gain = p.pure_fading ? 1.0 : p.d0 / dc;
  double h2 = 1.0;
  if (p.fading_enabled) {
    const double x = rng.normal();
    const double y = rng.normal();
    h2 = x * x + y * y;
  }
  // |h|^2 = 0 has probability zero; floor keeps the dB transform finite.
  const double mag2 = std::max(gain * gain * h2, 1e-12);
  return 10.0 * std::log10(mag2);
}

double los_probability(double d, const ChannelParams& p) {
  const double cutoff = d > 20.0 ? 20.0 / d : 1.0;
  const double decay = std::pow(p.epsilon_los, d / 39.0);
  return cutoff * (1.0 - decay) + decay;
}

double received_power(double pt_dbm, double d, Rng& rng, const ChannelParams& p) {
  return pt_dbm - path_loss(d, p) + fading_sample(rng, d, p) +
         10.0 * std::log10(los_probability(d, p));
}

double expected_received_power(double pt_dbm, double d, const ChannelParams& p) {
  ChannelParams q = p;
  q.fading_enabled = false;
  Rng unused(0);
  return received_power(pt_dbm, d, unused, q);
}

double RsrpWindow::push_and_average(double sample_dbm) {
  buf_.push_back(sample_dbm);
  if (static_cast<int>(buf_.size()) > capacity_) buf_.pop_front();
  return average();
}

double RsrpWindow::average() const {
  double sum = 0.0;
  for (double v : buf_) sum += v;
  return buf_.empty() ? 0.0 : sum / static_cast<double>(buf_.size());
}

}  // namespace chosim
