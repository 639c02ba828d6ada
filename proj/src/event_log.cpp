#include "chosim/event_log.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace chosim {

std::string EpisodeLog::to_jsonl() const {
  std::ostringstream os;
  write_jsonl(os);
  return os.str();
}

void EpisodeLog::write_jsonl(std::ostream& os) const {
  for (const auto& r : records_) os << r.dump() << '\n';
}

EpisodeLog EpisodeLog::from_jsonl(std::istream& is) {
  EpisodeLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto r = nlohmann::json::parse(line, nullptr, false);
    if (r.is_discarded() || !r.contains("t_ms") || !r.contains("kind"))
      throw std::runtime_error("bad episode log record at line " + std::to_string(lineno));
    log.records_.push_back(std::move(r));
  }
  return log;
}

RunMetrics metrics_from_log(const EpisodeLog& log) {
  RunMetrics m;
  double rsrp_sum = 0.0;
  long rsrp_n = 0;
  for (const auto& r : log.records()) {
    const std::string& kind = r.at("kind").get_ref<const std::string&>();
    if (kind == "rlf") {
      ++m.rlf_count;
    } else if (kind == "handover_failure") {
      ++m.hf_count;
    } else if (kind == "handover_complete") {
      ++m.handover_count;
      if (r.value("ping_pong", false)) ++m.ping_pong_count;
    } else if (kind == "boost_applied") {
      ++m.boost_count;
    } else if (kind == "boost_suppressed") {
      ++m.suppressed_count;
    } else if (kind == "in_sync" || kind == "out_of_sync") {
      rsrp_sum += r.at("rsrp").get<double>();
      ++rsrp_n;
    }
  }
  m.mean_serving_rsrp = rsrp_n > 0 ? rsrp_sum / static_cast<double>(rsrp_n) : 0.0;
  return m;
}

std::string metrics_csv_header() {
  return "rlf_count,hf_count,handover_count,ping_pong_count,boost_count,suppressed_count,"
         "mean_serving_rsrp";
}

std::string metrics_csv_row(const RunMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%d,%.6f", m.rlf_count, m.hf_count,
                m.handover_count, m.ping_pong_count, m.boost_count, m.suppressed_count,
                m.mean_serving_rsrp);
  return buf;
}

}  // namespace chosim
