#include "manifest.hpp"

#include <ctime>
#include <fstream>

#include "sqkd/serialize.hpp"
#include "sqkd/version.hpp"

namespace sqkd::cli {

namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

RunManifest make_manifest(std::string command, std::uint64_t seed) {
  RunManifest m;
  m.command = std::move(command);
  m.version = kVersion;
  m.seed = seed;
  m.timestamp_utc = utc_now();
  return m;
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : m.params) params[key] = value;
  return {{"command", m.command},      {"version", m.version},
          {"seed", m.seed},            {"params", std::move(params)},
          {"outputs", m.outputs},      {"timestamp_utc", m.timestamp_utc},
          {"duration_ms", m.duration_ms}};
}

void write_manifest_sidecar(const RunManifest& m, const std::filesystem::path& data_path) {
  const std::filesystem::path side = data_path.string() + ".manifest.json";
  std::ofstream out(side);
  if (!out) throw ConfigError("cannot write manifest sidecar: " + side.string());
  out << manifest_to_json(m).dump(2) << '\n';
}

}  // namespace sqkd::cli
