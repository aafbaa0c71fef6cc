#pragma once

// Command implementations behind the `sqkd` binary, kept in a library so the
// acceptance suite can drive them in-process as well.

#include <cstdint>
#include <optional>
#include <string>

namespace sqkd::cli {

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out;             // output path; empty selects a default name
  std::string format = "csv";  // csv or json, where the command supports both
  unsigned jobs = 1;
};

// Exit codes: 0 success, 1 domain/solver failure, 2 I/O or config failure.
// Commands throw sqkd::ConfigError for I/O and config problems; main() maps
// exception types onto the exit-code contract.

int cmd_table1(const CommonOptions& opts, std::optional<double> zeta,
               std::optional<double> xi, int precision);

int cmd_curve(const CommonOptions& opts, double zeta, double xi, double q_max,
              std::size_t steps);

int cmd_simulate(const CommonOptions& opts, const std::string& config_path,
                 std::size_t trials, bool with_transcripts);

int cmd_verify_bound(const CommonOptions& opts, std::size_t samples, std::size_t d1,
                     std::size_t d2);

}  // namespace sqkd::cli
