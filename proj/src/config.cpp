#include "chosim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace chosim {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& v, int line) {
  std::size_t pos = 0;
  double d;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(line, "trailing characters after number: '" + v + "'");
  return d;
}

long parse_int(const std::string& v, int line) {
  std::size_t pos = 0;
  long n;
  try {
    n = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(line, "trailing characters after integer: '" + v + "'");
  return n;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError(line, "expected true/false, got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(line, "empty element in list '" + v + "'");
    out.push_back(parse_double(item, line));
  }
  if (out.empty()) throw ConfigError(line, "expected a comma-separated list");
  return out;
}

std::vector<int> parse_int_list(const std::string& v, int line) {
  std::vector<int> out;
  for (double d : parse_double_list(v, line)) out.push_back(static_cast<int>(d));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt(v[i]);
  }
  return out;
}

std::string fmt_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Applies one key. Central switchboard shared by the file parser, the
// canonical writer (via Config::canonical) and dotted-key overrides.
namespace {

void apply_key(Config& c, const std::string& section, const std::string& key,
               const std::string& value, int line) {
  RunConfig& r = c.run;
  auto unknown = [&]() -> ConfigError {
    return ConfigError(line, "unknown key '" + key + "' in section [" + section + "]");
  };

  if (section == "simulation") {
    if (key == "mode") r.mode = sim_mode_from_string(value);
    else if (key == "seed") r.seed = static_cast<std::uint64_t>(parse_int(value, line));
    else if (key == "dt_ms") r.dt_ms = parse_double(value, line);
    else if (key == "rsrp_sample_period_ms") r.rsrp_sample_period_ms = parse_double(value, line);
    else if (key == "area_x_m") r.area_x_m = parse_double(value, line);
    else if (key == "area_y_m") r.area_y_m = parse_double(value, line);
    else if (key == "frequency_ghz") c.frequency_ghz = parse_double(value, line);
    else if (key == "bandwidth_mhz") c.bandwidth_mhz = parse_double(value, line);
    else if (key == "heatmap_res_m") r.heatmap_res_m = parse_double(value, line);
    else throw unknown();
  } else if (section == "scenario") {
    if (key == "kind") {
      if (value == "training") r.scenario.kind = ScenarioKind::Training;
      else if (value == "test") r.scenario.kind = ScenarioKind::Test;
      else if (value == "custom") r.scenario.kind = ScenarioKind::Custom;
      else throw ConfigError(line, "unknown scenario kind '" + value + "'");
    } else if (key == "ue_path_y_m") r.scenario.ue_path_y_m = parse_double(value, line);
    else if (key == "ue_speed_kmh") r.scenario.ue_speed_kmh = parse_double(value, line);
    else if (key == "gnb_tx_power_dbm") r.scenario.gnb_tx_power_dbm = parse_double(value, line);
    else if (key == "gnb_tx_power_max_dbm")
      r.scenario.gnb_tx_power_max_dbm = parse_double(value, line);
    else throw unknown();
  } else if (section == "channel") {
    if (key == "alpha") r.channel.alpha = parse_double(value, line);
    else if (key == "d0_m") r.channel.d0 = parse_double(value, line);
    else if (key == "epsilon_los") r.channel.epsilon_los = parse_double(value, line);
    else if (key == "fading") r.channel.fading_enabled = parse_bool(value, line);
    else if (key == "pure_fading") r.channel.pure_fading = parse_bool(value, line);
    else if (key == "avg_window") r.channel.avg_window = static_cast<int>(parse_int(value, line));
    else throw unknown();
  } else if (section == "cho") {
    if (key == "o_prep_db") r.cho.o_prep_db = parse_double(value, line);
    else if (key == "o_exec_db") r.cho.o_exec_db = parse_double(value, line);
    else if (key == "t_prep_ms") r.cho.t_prep_ms = parse_double(value, line);
    else if (key == "t_exec_ms") r.cho.t_exec_ms = parse_double(value, line);
    else if (key == "ping_pong_window_ms") r.ping_pong_window_ms = parse_double(value, line);
    else throw unknown();
  } else if (section == "rlf") {
    if (key == "s_rlf_dbm") {
      // the default in-sync threshold tracks s_rlf unless set explicitly
      const bool tied = r.rlf.q_in_dbm == r.rlf.s_rlf_dbm;
      r.rlf.s_rlf_dbm = parse_double(value, line);
      if (tied) r.rlf.q_in_dbm = r.rlf.s_rlf_dbm;
    } else if (key == "q_in_dbm") r.rlf.q_in_dbm = parse_double(value, line);
    else if (key == "n310") r.rlf.n310 = static_cast<int>(parse_int(value, line));
    else if (key == "t310_ms") r.rlf.t310_ms = parse_double(value, line);
    else throw unknown();
  } else if (section == "power") {
    if (key == "increment_mw") r.power.increment_mw = parse_double(value, line);
    else if (key == "cap_dbm") r.power.cap_dbm = parse_double(value, line);
    else if (key == "boost_ms") r.power.boost_ms = parse_double(value, line);
    else if (key == "cooldown_ms") r.power.cooldown_ms = parse_double(value, line);
    else throw unknown();
  } else if (section == "reward") {
    if (key == "sinr_threshold_db") r.reward.sinr_threshold_db = parse_double(value, line);
    else if (key == "noise_dbm") r.reward.noise_dbm = parse_double(value, line);
    else if (key == "probe_radius_m") r.reward.probe_radius_m = parse_double(value, line);
    else if (key == "probe_offset_m") r.reward.probe_offset_m = parse_double(value, line);
    else if (key == "attribution_extra_ms")
      r.reward.attribution_extra_ms = parse_double(value, line);
    else if (key == "sinr_window_ms") r.reward.sinr_window_ms = parse_double(value, line);
    else throw unknown();
  } else if (section == "agent") {
    if (key == "gamma") r.agent.gamma = parse_double(value, line);
    else if (key == "eps_start") r.agent.eps_start = parse_double(value, line);
    else if (key == "eps_end") r.agent.eps_end = parse_double(value, line);
    else if (key == "tau_eps") r.agent.tau_eps = parse_double(value, line);
    else if (key == "buffer") r.agent.buffer_capacity = static_cast<std::size_t>(parse_int(value, line));
    else if (key == "batch") r.agent.batch = static_cast<int>(parse_int(value, line));
    else if (key == "n_start") r.agent.n_start = static_cast<int>(parse_int(value, line));
    else if (key == "c_target") r.agent.c_target = static_cast<int>(parse_int(value, line));
    else if (key == "g_max") r.agent.g_max = parse_double(value, line);
    else if (key == "huber_delta") r.agent.huber_delta = parse_double(value, line);
    else if (key == "lr") r.agent.adam.lr = parse_double(value, line);
    else if (key == "beta1") r.agent.adam.beta1 = parse_double(value, line);
    else if (key == "beta2") r.agent.adam.beta2 = parse_double(value, line);
    else if (key == "adam_eps") r.agent.adam.eps = parse_double(value, line);
    else throw unknown();
  } else if (section == "training") {
    auto& t = r.training;
    if (key == "episodes") t.episodes = static_cast<int>(parse_int(value, line));
    else if (key == "base_speed_kmh_lo") t.base_speed_kmh_lo = parse_double(value, line);
    else if (key == "base_speed_kmh_hi") t.base_speed_kmh_hi = parse_double(value, line);
    else if (key == "speed_scale_lo") t.speed_scale_lo = parse_double(value, line);
    else if (key == "speed_scale_hi") t.speed_scale_hi = parse_double(value, line);
    else if (key == "o_prep_options") t.o_prep_options = parse_double_list(value, line);
    else if (key == "o_exec_options") t.o_exec_options = parse_double_list(value, line);
    else if (key == "t_prep_options") t.t_prep_options = parse_double_list(value, line);
    else if (key == "t_exec_options") t.t_exec_options = parse_double_list(value, line);
    else if (key == "t310_options") t.t310_options = parse_double_list(value, line);
    else if (key == "n310_options") t.n310_options = parse_int_list(value, line);
    else if (key == "s_rlf_options") t.s_rlf_options = parse_double_list(value, line);
    else throw unknown();
  } else if (section.rfind("gnb ", 0) == 0) {
    const std::string id_str = trim(section.substr(4));
    int id;
    try {
      id = std::stoi(id_str);
    } catch (const std::exception&) {
      throw ConfigError(line, "bad gNB id in section [" + section + "]");
    }
    auto& list = r.scenario.custom_gnbs;
    auto it = std::find_if(list.begin(), list.end(),
                           [id](const GnbConfig& g) { return g.id == id; });
    if (it == list.end()) {
      GnbConfig g;
      g.id = id;
      g.tx_power = r.scenario.gnb_tx_power_dbm;
      g.tx_power_initial = g.tx_power;
      g.tx_power_max = r.scenario.gnb_tx_power_max_dbm;
      list.push_back(g);
      it = list.end() - 1;
    }
    if (key == "x") it->x = parse_double(value, line);
    else if (key == "y") it->y = parse_double(value, line);
    else if (key == "tx_power_dbm") {
      it->tx_power = parse_double(value, line);
      it->tx_power_initial = it->tx_power;
      it->tx_power_max = std::max(it->tx_power_max, it->tx_power);
    } else throw unknown();
  } else {
    throw ConfigError(line, "unknown section [" + section + "]");
  }
}

}  // namespace

Config Config::from_string(const std::string& text) {
  Config c = defaults();
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError(line, "empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (section.empty()) throw ConfigError(line, "key '" + key + "' appears before any section");
    apply_key(c, section, key, value, line);
  }
  try {
    c.run.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  return c;
}

Config Config::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_string(ss.str());
}

void Config::set(const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw ConfigError(0, "override key must be section.key: " + dotted_key);
  apply_key(*this, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), trim(value), 0);
  try {
    run.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
}

std::string Config::canonical() const {
  const RunConfig& r = run;
  std::ostringstream os;
  os << "[simulation]\n";
  os << "mode = " << to_string(r.mode) << "\n";
  os << "seed = " << r.seed << "\n";
  os << "dt_ms = " << fmt(r.dt_ms) << "\n";
  os << "rsrp_sample_period_ms = " << fmt(r.rsrp_sample_period_ms) << "\n";
  os << "area_x_m = " << fmt(r.area_x_m) << "\n";
  os << "area_y_m = " << fmt(r.area_y_m) << "\n";
  os << "frequency_ghz = " << fmt(frequency_ghz) << "\n";
  os << "bandwidth_mhz = " << fmt(bandwidth_mhz) << "\n";
  os << "heatmap_res_m = " << fmt(r.heatmap_res_m) << "\n";
  os << "[scenario]\n";
  os << "kind = "
     << (r.scenario.kind == ScenarioKind::Training
             ? "training"
             : r.scenario.kind == ScenarioKind::Test ? "test" : "custom")
     << "\n";
  os << "ue_path_y_m = " << fmt(r.scenario.ue_path_y_m) << "\n";
  os << "ue_speed_kmh = " << fmt(r.scenario.ue_speed_kmh) << "\n";
  os << "gnb_tx_power_dbm = " << fmt(r.scenario.gnb_tx_power_dbm) << "\n";
  os << "gnb_tx_power_max_dbm = " << fmt(r.scenario.gnb_tx_power_max_dbm) << "\n";
  os << "[channel]\n";
  os << "alpha = " << fmt(r.channel.alpha) << "\n";
  os << "d0_m = " << fmt(r.channel.d0) << "\n";
  os << "epsilon_los = " << fmt(r.channel.epsilon_los) << "\n";
  os << "fading = " << (r.channel.fading_enabled ? "true" : "false") << "\n";
  os << "pure_fading = " << (r.channel.pure_fading ? "true" : "false") << "\n";
  os << "avg_window = " << r.channel.avg_window << "\n";
  os << "[cho]\n";
  os << "o_prep_db = " << fmt(r.cho.o_prep_db) << "\n";
  os << "o_exec_db = " << fmt(r.cho.o_exec_db) << "\n";
  os << "t_prep_ms = " << fmt(r.cho.t_prep_ms) << "\n";
  os << "t_exec_ms = " << fmt(r.cho.t_exec_ms) << "\n";
  os << "ping_pong_window_ms = " << fmt(r.ping_pong_window_ms) << "\n";
  os << "[rlf]\n";
  os << "s_rlf_dbm = " << fmt(r.rlf.s_rlf_dbm) << "\n";
  os << "q_in_dbm = " << fmt(r.rlf.q_in_dbm) << "\n";
  os << "n310 = " << r.rlf.n310 << "\n";
  os << "t310_ms = " << fmt(r.rlf.t310_ms) << "\n";
  os << "[power]\n";
  os << "increment_mw = " << fmt(r.power.increment_mw) << "\n";
  os << "cap_dbm = " << fmt(r.power.cap_dbm) << "\n";
  os << "boost_ms = " << fmt(r.power.boost_ms) << "\n";
  os << "cooldown_ms = " << fmt(r.power.cooldown_ms) << "\n";
  os << "[reward]\n";
  os << "sinr_threshold_db = " << fmt(r.reward.sinr_threshold_db) << "\n";
  os << "noise_dbm = " << fmt(r.reward.noise_dbm) << "\n";
  os << "probe_radius_m = " << fmt(r.reward.probe_radius_m) << "\n";
  os << "probe_offset_m = " << fmt(r.reward.probe_offset_m) << "\n";
  os << "attribution_extra_ms = " << fmt(r.reward.attribution_extra_ms) << "\n";
  os << "sinr_window_ms = " << fmt(r.reward.sinr_window_ms) << "\n";
  os << "[agent]\n";
  os << "gamma = " << fmt(r.agent.gamma) << "\n";
  os << "eps_start = " << fmt(r.agent.eps_start) << "\n";
  os << "eps_end = " << fmt(r.agent.eps_end) << "\n";
  os << "tau_eps = " << fmt(r.agent.tau_eps) << "\n";
  os << "buffer = " << r.agent.buffer_capacity << "\n";
  os << "batch = " << r.agent.batch << "\n";
  os << "n_start = " << r.agent.n_start << "\n";
  os << "c_target = " << r.agent.c_target << "\n";
  os << "g_max = " << fmt(r.agent.g_max) << "\n";
  os << "huber_delta = " << fmt(r.agent.huber_delta) << "\n";
  os << "lr = " << fmt(r.agent.adam.lr) << "\n";
  os << "beta1 = " << fmt(r.agent.adam.beta1) << "\n";
  os << "beta2 = " << fmt(r.agent.adam.beta2) << "\n";
  os << "adam_eps = " << fmt(r.agent.adam.eps) << "\n";
  os << "[training]\n";
  os << "episodes = " << r.training.episodes << "\n";
  os << "base_speed_kmh_lo = " << fmt(r.training.base_speed_kmh_lo) << "\n";
  os << "base_speed_kmh_hi = " << fmt(r.training.base_speed_kmh_hi) << "\n";
  os << "speed_scale_lo = " << fmt(r.training.speed_scale_lo) << "\n";
  os << "speed_scale_hi = " << fmt(r.training.speed_scale_hi) << "\n";
  os << "o_prep_options = " << fmt_list(r.training.o_prep_options) << "\n";
  os << "o_exec_options = " << fmt_list(r.training.o_exec_options) << "\n";
  os << "t_prep_options = " << fmt_list(r.training.t_prep_options) << "\n";
  os << "t_exec_options = " << fmt_list(r.training.t_exec_options) << "\n";
  os << "t310_options = " << fmt_list(r.training.t310_options) << "\n";
  os << "n310_options = " << fmt_list(r.training.n310_options) << "\n";
  os << "s_rlf_options = " << fmt_list(r.training.s_rlf_options) << "\n";
  for (const auto& g : r.scenario.custom_gnbs) {
    os << "[gnb " << g.id << "]\n";
    os << "x = " << fmt(g.x) << "\n";
    os << "y = " << fmt(g.y) << "\n";
    os << "tx_power_dbm = " << fmt(g.tx_power) << "\n";
  }
  return os.str();
}

std::string Config::hash() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

}  // namespace chosim
