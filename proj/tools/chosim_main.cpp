#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chosim/config.hpp"
#include "chosim/dqn_agent.hpp"
#include "chosim/engine.hpp"
#include "chosim/event_log.hpp"
#include "chosim/sweep.hpp"
#include "chosim/version.hpp"

namespace fs = std::filesystem;
using namespace chosim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitMissingArtifact = 3;

struct MissingArtifact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Config load_config(const std::string& path) {
  if (path.empty()) return Config::defaults();
  return Config::from_file(path);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

void write_manifest(const fs::path& out_dir, const Config& cfg, std::uint64_t seed,
                    const std::string& command) {
  nlohmann::json m;
  m["config_hash"] = cfg.hash();
  m["seed"] = seed;
  m["version"] = kVersion;
  m["command"] = command;
  write_file(out_dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_dir, std::optional<int> episodes) {
  Config cfg = load_config(config_path);
  if (seed) cfg.run.seed = *seed;
  if (episodes) cfg.run.training.episodes = *episodes;
  fs::create_directories(out_dir);

  DqnAgent agent({kStateDim, 64, 64, 64, 2}, cfg.run.agent, cfg.run.seed);
  const int total = cfg.run.training.episodes;
  const TrainResult result = train(cfg.run, agent, [&](const EpisodeCurvePoint& p) {
    if (p.episode % 100 == 0 || p.episode == total) {
      std::fprintf(stderr, "episode %d/%d reward %.1f loss %.4f eps %.3f rlf %d hf %d\n",
                   p.episode, total, p.reward, p.mean_loss, p.epsilon, p.rlf_count, p.hf_count);
    }
  });

  std::ostringstream curves;
  curves << "episode,reward,mean_loss,epsilon,rlf_count,hf_count\n";
  for (const auto& p : result.curves) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.8f,%.6f,%d,%d\n", p.episode, p.reward, p.mean_loss,
                  p.epsilon, p.rlf_count, p.hf_count);
    curves << buf;
  }
  write_file(fs::path(out_dir) / "curves.csv", curves.str());

  const fs::path ckpt = fs::path(out_dir) / "agent.ckpt";
  if (!result.abort_reason.empty()) {
    // divergence: keep the last finite-loss checkpoint and report
    std::ofstream f(ckpt, std::ios::binary);
    f.write(reinterpret_cast<const char*>(result.last_good_checkpoint.data()),
            static_cast<std::streamsize>(result.last_good_checkpoint.size()));
    std::cerr << "training aborted (" << result.abort_reason
              << "); last good checkpoint written to " << ckpt << "\n";
    write_manifest(out_dir, cfg, cfg.run.seed, "train");
    return 1;
  }
  agent.save(ckpt.string());
  write_manifest(out_dir, cfg, cfg.run.seed, "train");
  std::cout << "trained " << result.curves.size() << " episodes -> " << ckpt << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param, const std::string& values,
              const std::string& modes_csv, int seeds, std::optional<std::uint64_t> seed,
              const std::string& checkpoint, const std::string& out_dir, int jobs) {
  Config cfg = load_config(config_path);

  SweepSpec spec;
  spec.parameter = param;
  if (!values.empty()) {
    spec.values = parse_values(values);
  } else {
    const auto def = default_sweep_values(param);
    if (!def) throw ConfigError(0, "unknown sweep parameter: " + param);
    spec.values = *def;
  }
  std::stringstream ss(modes_csv);
  std::string mode;
  while (std::getline(ss, mode, ','))
    if (!mode.empty()) spec.modes.push_back(sim_mode_from_string(mode));
  spec.seeds_per_point = seeds;
  spec.base_seed = seed.value_or(cfg.run.seed);
  spec.checkpoint_path = checkpoint;
  spec.jobs = jobs;

  for (SimMode m : spec.modes) {
    if ((m == SimMode::ChoDrlTrained || m == SimMode::ChoDrlTraining)) {
      if (checkpoint.empty())
        throw MissingArtifact("mode " + to_string(m) + " requires --checkpoint");
      if (!fs::exists(checkpoint)) throw MissingArtifact("checkpoint not found: " + checkpoint);
    }
  }

  const auto rows = run_sweep(spec, cfg);
  fs::create_directories(out_dir);
  std::ostringstream os;
  os << sweep_csv_header() << "\n";
  for (const auto& row : rows) os << sweep_csv_row(row) << "\n";
  write_file(fs::path(out_dir) / "results.csv", os.str());
  write_manifest(out_dir, cfg, spec.base_seed, "sweep " + param);
  std::cout << "wrote " << rows.size() << " rows -> " << (fs::path(out_dir) / "results.csv")
            << "\n";
  return kExitOk;
}

int cmd_heatmap(const std::string& config_path, const std::string& out_dir) {
  Config cfg = load_config(config_path);
  const auto cells = rsrp_heatmap(cfg.run);
  fs::create_directories(out_dir);
  std::ostringstream os;
  os << "x,y,rsrp_dbm\n";
  for (const auto& c : cells) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.1f,%.1f,%.4f\n", c.x, c.y, c.rsrp_dbm);
    os << buf;
  }
  write_file(fs::path(out_dir) / "heatmap.csv", os.str());
  write_manifest(out_dir, cfg, cfg.run.seed, "heatmap");
  std::cout << "wrote " << cells.size() << " cells -> " << (fs::path(out_dir) / "heatmap.csv")
            << "\n";
  return kExitOk;
}

int cmd_replay(const std::string& log_path, const std::string& out_path) {
  std::ifstream f(log_path);
  if (!f) throw MissingArtifact("episode log not found: " + log_path);
  const EpisodeLog log = EpisodeLog::from_jsonl(f);
  const RunMetrics m = metrics_from_log(log);
  const std::string csv = metrics_csv_header() + "\n" + metrics_csv_row(m) + "\n";
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_file(out_path, csv);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional-handover simulator with DQN power control"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", values, modes = "cho", checkpoint, log_path, out_path;
  std::string param;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  int seeds = 5, jobs = 0;

  auto* train_cmd = app.add_subcommand("train", "Train the power-control agent");
  train_cmd->add_option("--config", config_path, "Config file");
  train_cmd->add_option("--seed", seed, "Master seed (overrides config)");
  train_cmd->add_option("--out", out_dir, "Output directory");
  train_cmd->add_option("--episodes", episodes, "Episode count (overrides config)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep over modes and seeds");
  sweep_cmd->add_option("--config", config_path, "Config file");
  sweep_cmd->add_option("--param", param, "Swept parameter")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values (default: built-in grid)");
  sweep_cmd->add_option("--modes", modes, "Comma-separated modes (cho, cho_drl, greedy)");
  sweep_cmd->add_option("--seeds", seeds, "Seeds per point");
  sweep_cmd->add_option("--seed", seed, "Base seed");
  sweep_cmd->add_option("--checkpoint", checkpoint, "Agent checkpoint for DRL modes");
  sweep_cmd->add_option("--out", out_dir, "Output directory");
  sweep_cmd->add_option("--jobs", jobs, "Parallel workers (0 = all cores)");

  auto* heatmap_cmd = app.add_subcommand("heatmap", "RSRP coverage grid CSV");
  heatmap_cmd->add_option("--config", config_path, "Config file");
  heatmap_cmd->add_option("--out", out_dir, "Output directory");

  auto* replay_cmd = app.add_subcommand("replay", "Recount metrics from an episode log");
  replay_cmd->add_option("--log", log_path, "Episode log (JSON lines)")->required();
  replay_cmd->add_option("--out", out_path, "Metrics CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(config_path, seed, out_dir, episodes);
    if (sweep_cmd->parsed())
      return cmd_sweep(config_path, param, values, modes, seeds, seed, checkpoint, out_dir, jobs);
    if (heatmap_cmd->parsed()) return cmd_heatmap(config_path, out_dir);
    if (replay_cmd->parsed()) return cmd_replay(log_path, out_path);
  } catch (const MissingArtifact& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissingArtifact;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
