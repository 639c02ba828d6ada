#pragma once

#include <cstddef>
#include <deque>

#include "chosim/rng.hpp"

namespace chosim {

struct ChannelParams {
  double alpha = 2.8;        // path-loss exponent
  double d0 = 1.0;           // reference distance, m
  double epsilon_los = 0.8;  // LoS density constant, in (0, 1)
  bool fading_enabled = true;
  // The multipath term re-applies the (d0/d) gain on top of PL(d), which
  // steepens the distance decay. pure_fading drops that factor and keeps
  // only the |h|^2 fluctuation.
  bool pure_fading = false;
  int avg_window = 5;  // N, samples
};

// Log-distance attenuation in dB: 10 * alpha * log10(d / d0).
// d below d0 is clamped to d0.
double path_loss(double d, const ChannelParams& p);

// Multipath term in dB: 10*log10(|(d0/d) h|^2) with h = x + jy, x,y ~ N(0,1).
// With fading disabled the |h|^2 factor is replaced by 1.
double fading_sample(Rng& rng, double d, const ChannelParams& p);

// min(20/d, 1) * (1 - eps^(d/39)) + eps^(d/39); equals 1 for d <= 20 m.
double los_probability(double d, const ChannelParams& p);

// pt - PL(d) + F + 10*log10(p_LOS(d)), in dBm.
double received_power(double pt_dbm, double d, Rng& rng, const ChannelParams& p);

// Deterministic variant with the fading fluctuation disabled; used for
// expected-power queries (heatmaps, probe SINR).
double expected_received_power(double pt_dbm, double d, const ChannelParams& p);

// Moving-average window over the last <= N raw RSRP samples of one
// (UE, gNB) link. Averages over fewer than N samples use what is present.
class RsrpWindow {
 public:
  RsrpWindow() = default;
  explicit RsrpWindow(int capacity) : capacity_(capacity) {}

  // Appends a sample, evicts the oldest beyond N, returns the mean.
  double push_and_average(double sample_dbm);

  double average() const;
  std::size_t size() const { return buf_.size(); }
  void reset() { buf_.clear(); }

 private:
  int capacity_ = 5;
  std::deque<double> buf_;
};

}  // namespace chosim
