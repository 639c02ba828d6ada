#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "chosim/engine.hpp"

namespace chosim {

// Parse/validation failure, anchored to the offending line (0 = no line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Flat key-value config with [section] headers. Defaults carry the paper's
// default simulation and training parameters; a file overrides them
// key by key. Unknown sections or keys are errors.
struct Config {
  RunConfig run;
  // Informational (no numerical effect on the simulation):
  double frequency_ghz = 25.0;
  double bandwidth_mhz = 100.0;

  static Config defaults() { return Config{}; }

  // Throws ConfigError with a line anchor on any problem.
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  // Applies one "section.key" override (same validation as file keys).
  void set(const std::string& dotted_key, const std::string& value);

  // Canonical serialization: every key in a fixed order, suitable for
  // hashing and for regenerating a complete config file.
  std::string canonical() const;
  std::string hash() const;  // FNV-1a 64 over canonical(), hex
};

std::uint64_t fnv1a64(const std::string& data);

}  // namespace chosim
