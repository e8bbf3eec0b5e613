#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace acthull::cli {

/// Record of one CLI invocation, written next to its primary output.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void set_config(nlohmann::ordered_json config) { config_ = std::move(config); }
  /// Hashes the file now, so later edits to the input do not leak in.
  void add_input(const std::string& path);
  void add_output(const std::string& path) { outputs_.push_back(path); }

  /// Writes `<primary>.manifest.json` and returns its path.
  std::string write(const std::string& primary) const;

 private:
  std::string command_;
  std::uint64_t seed_ = 0;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace acthull::cli
