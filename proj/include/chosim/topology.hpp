#pragma once

#include <string>
#include <vector>

#include "chosim/rng.hpp"

namespace chosim {

struct GnbConfig {
  int id = 0;
  double x = 0.0, y = 0.0;       // m
  double tx_power = 33.0;        // dBm, current
  double tx_power_initial = 33.0;
  double tx_power_max = 38.5;    // K
};

enum class JitterMode { PerEpisode, PerStep };

struct UeTrajectory {
  double start_x = 0.0, start_y = 0.0;
  double end_x = 0.0, end_y = 0.0;
  double base_speed = 11.111;        // m/s
  double jitter_lo = 1.0, jitter_hi = 1.0;  // multiplicative range
  JitterMode jitter_mode = JitterMode::PerStep;
  double duration_ms = 0.0;
};

struct Scenario {
  std::vector<GnbConfig> gnbs;
  UeTrajectory trajectory;
  std::string label;  // "training" | "testing"
};

struct TrainingScenarioOptions {
  double base_speed_kmh_lo = 35.0;
  double base_speed_kmh_hi = 45.0;
  double speed_scale_lo = 0.8;
  double speed_scale_hi = 1.2;
  double tx_power_max = 38.5;
};

// Randomized 2-gNB layout: gNB1 at x~U[2,100], y~U[230,240] with tx power
// ~U[33,40] dBm; gNB2 at x~U[200,350], y~U[260,270] at a fixed 33 dBm. The
// UE runs a straight line from gNB1 towards gNB2 over 10,000 ms with a
// per-episode speed drawn from the base range times a U[0.8,1.2] scale.
Scenario build_training_scenario(Rng& rng, const TrainingScenarioOptions& opts = {});

// Fixed 15-gNB corridor deployment; UE from x=0 to x=3000 m at constant y
// (250 m unless overridden), nominal 40 km/h with per-step U[0.8,1.2] scale.
Scenario build_test_scenario(double ue_path_y = 250.0, double speed_kmh = 40.0,
                             double tx_power_dbm = 33.0, double tx_power_max_dbm = 38.5);

double distance(const GnbConfig& a, const GnbConfig& b);

// Advances the UE along the scenario's straight line, resampling the speed
// jitter per tick or holding the per-episode draw depending on the mode.
class UeMobility {
 public:
  UeMobility(const UeTrajectory& traj, Rng jitter_rng);

  // Moves by speed * jitter * dt. Returns false once the trajectory end
  // (or the duration budget) has been reached.
  bool advance(double dt_ms);

  double x() const { return x_; }
  double y() const { return y_; }
  double speed() const { return speed_; }  // m/s, current (jittered)
  double elapsed_ms() const { return elapsed_ms_; }
  bool done() const { return done_; }

 private:
  UeTrajectory traj_;
  Rng rng_;
  double x_, y_;
  double dir_x_ = 1.0, dir_y_ = 0.0;
  double path_len_ = 0.0;
  double traveled_ = 0.0;
  double speed_ = 0.0;
  double episode_scale_ = 1.0;
  double elapsed_ms_ = 0.0;
  bool done_ = false;
};

}  // namespace chosim
