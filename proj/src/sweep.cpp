#include "chosim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "chosim/dqn_agent.hpp"

namespace chosim {

std::optional<std::vector<double>> default_sweep_values(const std::string& parameter) {
  if (parameter == "n310") return std::vector<double>{3, 4, 5, 6, 7, 8};
  if (parameter == "t310") return std::vector<double>{600, 800, 1000, 1200, 1400};
  if (parameter == "o_prep") return std::vector<double>{1, 2, 3, 4};
  if (parameter == "o_exec") return std::vector<double>{2, 4, 6, 8};
  if (parameter == "t_prep") return std::vector<double>{40, 60, 80, 100};
  if (parameter == "t_exec") return std::vector<double>{40, 60, 80, 100};
  if (parameter == "avg_window") return std::vector<double>{1, 3, 5, 7, 10};
  return std::nullopt;
}

void apply_sweep_value(RunConfig& cfg, const std::string& parameter, double value) {
  if (parameter == "n310") {
    cfg.rlf.n310 = static_cast<int>(value);
  } else if (parameter == "t310") {
    cfg.rlf.t310_ms = value;
  } else if (parameter == "o_prep") {
    cfg.cho.o_prep_db = value;
  } else if (parameter == "o_exec") {
    cfg.cho.o_exec_db = value;
  } else if (parameter == "t_prep") {
    cfg.cho.t_prep_ms = value;
  } else if (parameter == "t_exec") {
    cfg.cho.t_exec_ms = value;
  } else if (parameter == "avg_window") {
    cfg.channel.avg_window = static_cast<int>(value);
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + parameter);
  }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Config& base) {
  if (spec.values.empty()) throw std::invalid_argument("sweep needs at least one value");
  if (spec.modes.empty()) throw std::invalid_argument("sweep needs at least one mode");
  if (spec.seeds_per_point < 1) throw std::invalid_argument("sweep needs at least one seed");

  bool needs_agent = false;
  for (SimMode m : spec.modes)
    if (m == SimMode::ChoDrlTrained || m == SimMode::ChoDrlTraining) needs_agent = true;

  std::optional<DqnAgent> agent;
  if (needs_agent) {
    agent = DqnAgent::load(spec.checkpoint_path, base.run.agent, base.run.seed,
                           {kStateDim, 64, 64, 64, 2});
    agent->set_mode(DqnAgent::Mode::Frozen);
  }

  // Task list in output order (parameter, value, mode, seed); the merge is
  // deterministic regardless of completion order.
  std::vector<SweepRow> rows;
  for (double value : spec.values)
    for (SimMode mode : spec.modes)
      for (int k = 0; k < spec.seeds_per_point; ++k) {
        SweepRow row;
        row.parameter = spec.parameter;
        row.value = value;
        row.mode = mode;
        row.seed = spec.base_seed + static_cast<std::uint64_t>(k);
        rows.push_back(row);
      }

  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned jobs =
      spec.jobs > 0 ? static_cast<unsigned>(spec.jobs) : (hw > 0 ? hw : 1u);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_msg;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size() || failed.load()) return;
      SweepRow& row = rows[i];
      try {
        RunConfig cfg = base.run;
        cfg.scenario.kind = ScenarioKind::Test;
        cfg.mode = row.mode;
        cfg.seed = row.seed;
        apply_sweep_value(cfg, spec.parameter, row.value);
        if (row.mode == SimMode::ChoDrlTrained || row.mode == SimMode::ChoDrlTraining) {
          DqnAgent local = *agent;  // frozen copy per run
          row.metrics = run_episode(cfg, &local).metrics;
        } else {
          row.metrics = run_episode(cfg, nullptr).metrics;
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed = true;
        if (error_msg.empty()) error_msg = e.what();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed) throw std::runtime_error("sweep run failed: " + error_msg);
  return rows;
}

std::string sweep_csv_header() {
  return "parameter,value,mode,seed,rlf_count,hf_count,handover_count,ping_pong_count";
}

std::string sweep_csv_row(const SweepRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%.17g,%s,%llu,%d,%d,%d,%d", row.parameter.c_str(),
                row.value, to_string(row.mode).c_str(),
                static_cast<unsigned long long>(row.seed), row.metrics.rlf_count,
                row.metrics.hf_count, row.metrics.handover_count, row.metrics.ping_pong_count);
  return buf;
}

}  // namespace chosim
