#pragma once

// File formats: attack fixtures and protocol transcripts as JSON, simulation
// configs as flat key = value text.

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sqkd/attack.hpp"
#include "sqkd/protocol.hpp"

namespace sqkd {

// Parse or I/O failures on user-supplied files; mapped to exit code 2 by the
// command-line tools.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kAttackFormatVersion = 1;
inline constexpr int kTranscriptFormatVersion = 1;

// Complex entries as [re, im] pairs, row-major.
nlohmann::json attack_to_json(const AttackPair& attack);
AttackPair attack_from_json(const nlohmann::json& j);

AttackPair load_attack(const std::filesystem::path& path);
void save_attack(const AttackPair& attack, const std::filesystem::path& path);

nlohmann::json transcript_to_json(const ProtocolTranscript& t);
ProtocolTranscript transcript_from_json(const nlohmann::json& j);

struct SimulationSetup {
  ProtocolConfig config;
  ChannelModel channel;
};

// Flat key = value file ('#' starts a comment). Keys: n, delta, m, t_x, t_z,
// seed, retry_cap, channel.kind {ideal, symmetric-noise, attack},
// channel.q_z, channel.q_x, channel.attack_file. A relative attack_file is
// resolved against the config file's directory. Throws ConfigError with a
// file:line diagnostic on malformed input.
SimulationSetup load_sim_config(const std::filesystem::path& path);

}  // namespace sqkd
