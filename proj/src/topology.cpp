#include "chosim/topology.hpp"

#include <cmath>

namespace chosim {

namespace {
constexpr double kKmhToMs = 1000.0 / 3600.0;
}

Scenario build_training_scenario(Rng& rng, const TrainingScenarioOptions& opts) {
  Scenario s;
  s.label = "training";

  GnbConfig g1;
  g1.id = 1;
  g1.x = rng.uniform(2.0, 100.0);
  g1.y = rng.uniform(230.0, 240.0);
  g1.tx_power = rng.uniform(33.0, 40.0);
  g1.tx_power_initial = g1.tx_power;
  g1.tx_power_max = std::max(opts.tx_power_max, g1.tx_power);

  GnbConfig g2;
  g2.id = 2;
  g2.x = rng.uniform(200.0, 350.0);
  g2.y = rng.uniform(260.0, 270.0);
  g2.tx_power = 33.0;
  g2.tx_power_initial = 33.0;
  g2.tx_power_max = std::max(opts.tx_power_max, g2.tx_power);

  s.gnbs = {g1, g2};

  const double base_kmh = rng.uniform(opts.base_speed_kmh_lo, opts.base_speed_kmh_hi);
  const double scale = rng.uniform(opts.speed_scale_lo, opts.speed_scale_hi);

  UeTrajectory t;
  t.start_x = g1.x;
  t.start_y = g1.y;
  t.end_x = g2.x;
  t.end_y = g2.y;
  t.base_speed = base_kmh * kKmhToMs * scale;
  t.jitter_lo = 1.0;
  t.jitter_hi = 1.0;
  t.jitter_mode = JitterMode::PerEpisode;
  t.duration_ms = 10000.0;
  s.trajectory = t;
  return s;
}

Scenario build_test_scenario(double ue_path_y, double speed_kmh, double tx_power_dbm,
                             double tx_power_max_dbm) {
  static const double kPositions[15][2] = {
      {50, 150},    {190, 330},  {550, 180},  {700, 290},  {880, 160},
      {1040, 330},  {1190, 210}, {1330, 260}, {1630, 285}, {1770, 155},
      {1940, 400},  {2230, 180}, {2385, 340}, {2630, 115}, {2830, 300},
  };

  Scenario s;
  s.label = "testing";
  s.gnbs.reserve(15);
  for (int i = 0; i < 15; ++i) {
    GnbConfig g;
    g.id = i + 1;
    g.x = kPositions[i][0];
    g.y = kPositions[i][1];
    g.tx_power = tx_power_dbm;
    g.tx_power_initial = tx_power_dbm;
    g.tx_power_max = std::max(tx_power_max_dbm, tx_power_dbm);
    s.gnbs.push_back(g);
  }

  UeTrajectory t;
  t.start_x = 0.0;
  t.start_y = ue_path_y;
  t.end_x = 3000.0;
  t.end_y = ue_path_y;
  t.base_speed = speed_kmh * kKmhToMs;
  t.jitter_lo = 0.8;
  t.jitter_hi = 1.2;
  t.jitter_mode = JitterMode::PerStep;
  // Budget well past the nominal crossing time; the x >= 3000 m condition
  // is what normally ends the run.
  t.duration_ms = 3000.0 / t.base_speed * 1000.0 / 0.8 + 10000.0;
  s.trajectory = t;
  return s;
}

double distance(const GnbConfig& a, const GnbConfig& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

UeMobility::UeMobility(const UeTrajectory& traj, Rng jitter_rng)
    : traj_(traj), rng_(jitter_rng), x_(traj.start_x), y_(traj.start_y) {
  const double dx = traj.end_x - traj.start_x;
  const double dy = traj.end_y - traj.start_y;
  path_len_ = std::hypot(dx, dy);
  if (path_len_ > 0.0) {
    dir_x_ = dx / path_len_;
    dir_y_ = dy / path_len_;
  }
  episode_scale_ = traj.jitter_mode == JitterMode::PerEpisode
                       ? rng_.uniform(traj.jitter_lo, traj.jitter_hi)
                       : 1.0;
  speed_ = traj.base_speed * episode_scale_;
}

bool UeMobility::advance(double dt_ms) {
  if (done_) return false;
  const double jitter = traj_.jitter_mode == JitterMode::PerStep
                            ? rng_.uniform(traj_.jitter_lo, traj_.jitter_hi)
                            : episode_scale_;
  speed_ = traj_.base_speed * jitter;
  const double step = speed_ * dt_ms / 1000.0;
  traveled_ += step;
  x_ += dir_x_ * step;
  y_ += dir_y_ * step;
  elapsed_ms_ += dt_ms;
  // The training trajectory is duration-bound and may overshoot gNB2; the
  // test trajectory ends at the far edge of the service area.
  if (elapsed_ms_ >= traj_.duration_ms ||
      (path_len_ > 0.0 && traj_.jitter_mode == JitterMode::PerStep && traveled_ >= path_len_)) {
    done_ = true;
  }
  return !done_;
}

}  // namespace chosim
