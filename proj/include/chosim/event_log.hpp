#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace chosim {

// Ordered event records of one run; serializes to JSON-lines with one
// record per event: {"t_ms": ..., "kind": ..., <payload fields>}.
class EpisodeLog {
 public:
  using Record = nlohmann::json;

  void emit(long t_ms, const std::string& kind) {
    Record r;
    r["t_ms"] = t_ms;
    r["kind"] = kind;
    records_.push_back(std::move(r));
  }

  void emit(long t_ms, const std::string& kind, Record payload) {
    payload["t_ms"] = t_ms;
    payload["kind"] = kind;
    records_.push_back(std::move(payload));
  }

  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  std::string to_jsonl() const;
  void write_jsonl(std::ostream& os) const;
  static EpisodeLog from_jsonl(std::istream& is);

 private:
  std::vector<Record> records_;
};

struct RunMetrics {
  int rlf_count = 0;
  int hf_count = 0;
  int handover_count = 0;
  int ping_pong_count = 0;
  int boost_count = 0;
  int suppressed_count = 0;
  double mean_serving_rsrp = 0.0;
};

// Recounts metrics from a log; the engine derives its own metrics through
// this as well, so a replayed log reproduces them exactly.
RunMetrics metrics_from_log(const EpisodeLog& log);

std::string metrics_csv_header();
std::string metrics_csv_row(const RunMetrics& m);

}  // namespace chosim
