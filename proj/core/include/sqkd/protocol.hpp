#pragma once

// Discrete-event simulation of the two-way protocol. Bob prepares X-basis
// qubits and sends them out; Alice inserts fresh Z-basis qubits, reorders,
// and returns the first 2N of the combined pool; Bob measures each returned
// qubit in a random basis. Alice only prepares, permutes, and forwards;
// there is no measurement in her role. Classification, error estimation,
// threshold checks, and raw-key extraction follow.
//
// Per-qubit transit is simulated exactly: under an attack channel the
// outcome law is the Born distribution of the transit qubit with all of the
// eavesdropper's ancillas traced out (fresh ancillas each leg). All
// randomness derives from the config seed via named streams, so runs are
// bit-for-bit reproducible and individual trials are independent.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sqkd/attack.hpp"
#include "sqkd/rng.hpp"
#include "sqkd/stats.hpp"

namespace sqkd {

enum class Basis : std::uint8_t { z = 0, x = 1 };

enum class ChannelKind : std::uint8_t { ideal, symmetric_noise, attack };

struct ChannelModel {
  ChannelKind kind = ChannelKind::ideal;
  double q_z = 0.0, q_x = 0.0;  // symmetric_noise only
  AttackPair attack;            // attack only

  static ChannelModel make_ideal();
  static ChannelModel make_noise(double q_z, double q_x);
  static ChannelModel make_attack(AttackPair a);

  void validate(const Tolerances& tol = default_tolerances()) const;
};

struct ProtocolConfig {
  std::size_t n = 16;       // raw-key length; block parameter
  double delta = 0.0;       // overhead, N = ceil(4n(1+delta))
  std::size_t m = 0;        // Alice's insertion count M >= N; 0 means M = N
  double t_x = 0.1;         // reflected-qubit (X-basis) error threshold
  double t_z = 0.1;         // test-bit (Z-basis) error threshold
  std::uint64_t seed = 0;   // master RNG seed
  int retry_cap = 3;        // restarts allowed when too few usable key bits

  std::size_t block_size() const;  // N
  std::size_t resolved_m() const;  // M
  void validate() const;
};

enum class AbortReason : std::uint8_t {
  none = 0,
  insufficient_sift,
  ctrl_threshold,
  test_threshold,
};

const char* to_string(AbortReason r);

// Full record of one protocol run. Preparation values use bit encoding:
// Bob's X-basis states store 0 = |+>, 1 = |->; outcomes store the measured
// bit in the basis recorded in bob_bases (0 = |0> or |+>).
struct ProtocolTranscript {
  std::vector<std::uint8_t> bob_prepared;    // length N
  std::vector<std::uint8_t> alice_prepared;  // length M
  std::vector<std::size_t> permutation;      // send slot -> pool index, bijection on N+M
  std::vector<std::size_t> sent_positions;   // first 2N entries of permutation
  std::vector<Basis> bob_bases;              // length 2N
  std::vector<std::uint8_t> bob_outcomes;    // length 2N
  std::vector<std::size_t> sift_z_indices;   // send slots, ascending
  std::vector<std::size_t> ctrl_x_indices;   // send slots, ascending
  std::vector<std::size_t> test_indices;     // subset of sift_z_indices, ascending
  double q_x_est = 0.0;                      // 0 when the check never ran
  double q_z_est = 0.0;
  AbortReason abort = AbortReason::none;
  std::vector<std::uint8_t> raw_key_a;  // length n when abort == none
  std::vector<std::uint8_t> raw_key_b;
  int attempts = 1;  // 1 + restarts consumed

  bool slot_is_sift(std::size_t slot) const;
  // Bit prepared at a send slot: Alice's key bit for inserted qubits, Bob's
  // X-basis choice for reflected ones.
  std::uint8_t prepared_bit(std::size_t slot) const;
};

// Probability of measuring bit 0, indexed [is_sift][prepared_bit][basis].
// This is the exact per-qubit outcome law of the channel; the eavesdropper's
// ancillas, when present, are traced out.
struct OutcomeLaw {
  std::array<std::array<std::array<double, 2>, 2>, 2> p0{};
};

OutcomeLaw outcome_law(const ChannelModel& channel);

// Individually testable pieces of a run.
std::vector<std::uint8_t> prepare_bob(std::size_t count, Rng& rng);    // uniform over {+,-}
std::vector<std::uint8_t> prepare_alice(std::size_t count, Rng& rng);  // uniform over {0,1}
std::vector<std::size_t> random_permutation(std::size_t count, Rng& rng);

ProtocolTranscript run_protocol(const ProtocolConfig& config, const ChannelModel& channel);

// Pooled empirical statistics from transcripts of the same channel.
// Cells with an empty row denominator are absent rather than 0/0.
struct EmpiricalStats {
  std::array<std::array<std::uint64_t, 2>, 2> a_counts{};  // [alice sent][bob got]
  std::array<std::array<std::uint64_t, 2>, 2> b_counts{};  // [bob sent][bob got]

  std::uint64_t a_row_total(int i) const { return a_counts[i][0] + a_counts[i][1]; }
  std::uint64_t b_row_total(int i) const { return b_counts[i][0] + b_counts[i][1]; }
  std::optional<double> p_a(int i, int j) const;
  std::optional<double> p_b(int i, int j) const;
  // Available only when every row has data.
  std::optional<ChannelStats> to_channel_stats() const;
};

EmpiricalStats estimate_stats(const std::vector<ProtocolTranscript>& transcripts);

struct EndToEndReport {
  std::size_t trials = 0;
  std::size_t aborts = 0;
  double abort_rate = 0.0;
  double mean_q_z = 0.0;  // over completed (non-aborted) runs
  double mean_q_x = 0.0;
  EmpiricalStats pooled;  // from completed runs
  std::optional<double> r_tilde_from_estimates;
};

// Runs `trials` independent seeded protocol instances (seed derived from
// config.seed and the trial index), pools the estimates, and feeds them into
// the closed-form key-rate bound. Deterministic for fixed config, including
// under jobs > 1.
EndToEndReport end_to_end_rate(const ProtocolConfig& config, const ChannelModel& channel,
                               std::size_t trials, unsigned jobs = 1);

// Seed of an individual trial, exposed so sub-runs can be reproduced.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial);

}  // namespace sqkd
