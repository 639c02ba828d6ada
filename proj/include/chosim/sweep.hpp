#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chosim/config.hpp"
#include "chosim/engine.hpp"

namespace chosim {

// One swept parameter evaluated over (value, mode, seed) combinations.
struct SweepSpec {
  std::string parameter;  // n310|t310|o_prep|o_exec|t_prep|t_exec|avg_window
  std::vector<double> values;
  std::vector<SimMode> modes;
  int seeds_per_point = 5;
  std::uint64_t base_seed = 1;
  std::string checkpoint_path;  // required when a DRL mode is swept
  int jobs = 0;                 // 0 = hardware concurrency
};

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  SimMode mode = SimMode::Cho;
  std::uint64_t seed = 0;
  RunMetrics metrics;
};

// Default grid for a sweepable parameter (the x-axes of the parameter
// studies), or nullopt for an unknown name.
std::optional<std::vector<double>> default_sweep_values(const std::string& parameter);

// Applies one swept value onto a run config.
void apply_sweep_value(RunConfig& cfg, const std::string& parameter, double value);

// Runs the full cartesian grid (parallel across runs, merged in sort
// order), one test-scenario episode per row.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Config& base);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

}  // namespace chosim
