#pragma once

// Run provenance attached to every output file: CSV outputs get a
// `<file>.manifest.json` sidecar (keeping the data file itself byte-stable
// across reruns), JSON outputs embed the manifest as a top-level field.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sqkd::cli {

struct RunManifest {
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;  // insertion order
  std::vector<std::string> outputs;
  std::string timestamp_utc;  // volatile; excluded from determinism comparisons
  double duration_ms = 0.0;   // volatile

  void add_param(const std::string& key, const std::string& value) {
    params.emplace_back(key, value);
  }
};

class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

RunManifest make_manifest(std::string command, std::uint64_t seed);
nlohmann::json manifest_to_json(const RunManifest& m);
void write_manifest_sidecar(const RunManifest& m, const std::filesystem::path& data_path);

}  // namespace sqkd::cli
