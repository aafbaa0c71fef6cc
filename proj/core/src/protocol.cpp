#include "sqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "sqkd/keyrate.hpp"

namespace sqkd {

ChannelModel ChannelModel::make_ideal() { return ChannelModel{}; }

ChannelModel ChannelModel::make_noise(double q_z, double q_x) {
  ChannelModel c;
  c.kind = ChannelKind::symmetric_noise;
  c.q_z = q_z;
  c.q_x = q_x;
  c.validate();
  return c;
}

ChannelModel ChannelModel::make_attack(AttackPair a) {
  ChannelModel c;
  c.kind = ChannelKind::attack;
  c.attack = std::move(a);
  c.validate();
  return c;
}

void ChannelModel::validate(const Tolerances& tol) const {
  switch (kind) {
    case ChannelKind::ideal:
      break;
    case ChannelKind::symmetric_noise:
      if (q_z < 0.0 || q_z > 0.5 || q_x < 0.0 || q_x > 0.5)
        throw std::domain_error("ChannelModel: noise rates must lie in [0, 1/2]");
      break;
    case ChannelKind::attack:
      attack.validate(tol);
      break;
  }
}

std::size_t ProtocolConfig::block_size() const {
  return static_cast<std::size_t>(
      std::ceil(4.0 * static_cast<double>(n) * (1.0 + delta)));
}

std::size_t ProtocolConfig::resolved_m() const {
  return m == 0 ? block_size() : m;
}

void ProtocolConfig::validate() const {
  if (n == 0) throw std::domain_error("ProtocolConfig: n must be positive");
  if (delta < 0.0) throw std::domain_error("ProtocolConfig: delta must be >= 0");
  if (resolved_m() < block_size())
    throw std::domain_error("ProtocolConfig: m must be at least N = ceil(4n(1+delta))");
  if (t_x < 0.0 || t_x > 1.0 || t_z < 0.0 || t_z > 1.0)
    throw std::domain_error("ProtocolConfig: thresholds must lie in [0,1]");
  if (retry_cap < 0) throw std::domain_error("ProtocolConfig: retry_cap must be >= 0");
}

const char* to_string(AbortReason r) {
  switch (r) {
    case AbortReason::none: return "none";
    case AbortReason::insufficient_sift: return "insufficient-sift";
    case AbortReason::ctrl_threshold: return "ctrl-threshold";
    case AbortReason::test_threshold: return "test-threshold";
  }
  return "?";
}

bool ProtocolTranscript::slot_is_sift(std::size_t slot) const {
  return permutation[slot] >= bob_prepared.size();
}

std::uint8_t ProtocolTranscript::prepared_bit(std::size_t slot) const {
  const std::size_t origin = permutation[slot];
  return origin < bob_prepared.size() ? bob_prepared[origin]
                                      : alice_prepared[origin - bob_prepared.size()];
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr int kSift = 1;
constexpr int kCtrl = 0;
constexpr int kZ = 0;
constexpr int kX = 1;

// Exact outcome law for a fresh Z-basis qubit crossing the return leg only.
void fill_sift_law(const AttackPair& a, OutcomeLaw& law) {
  const std::size_t d2 = a.d2;
  for (int prep = 0; prep < 2; ++prep) {
    // psi[k*2 + t] = U_F(|0>_{E2} |prep>_T)
    std::vector<Complex> psi(d2 * 2);
    for (std::size_t r = 0; r < d2 * 2; ++r) psi[r] = a.u_f(r, prep);

    double pz0 = 0.0, px0 = 0.0;
    for (std::size_t k = 0; k < d2; ++k) {
      pz0 += std::norm(psi[k * 2 + 0]);
      px0 += 0.5 * std::norm(psi[k * 2 + 0] + psi[k * 2 + 1]);
    }
    law.p0[kSift][prep][kZ] = pz0;
    law.p0[kSift][prep][kX] = px0;
  }
}

// Exact outcome law for a reflected X-basis qubit crossing both legs, with
// independent fresh ancillas (composite state on E2 (x) T (x) E1).
void fill_ctrl_law(const AttackPair& a, OutcomeLaw& law) {
  const std::size_t d1 = a.d1;
  const std::size_t d2 = a.d2;
  for (int prep = 0; prep < 2; ++prep) {
    StateVector in(2 * d1);
    in[0 * d1 + 0] = kInvSqrt2;
    in[1 * d1 + 0] = (prep == 0 ? kInvSqrt2 : -kInvSqrt2);
    const StateVector phi = apply(a.u_e, in);

    // Psi[(k2, t, k1)] = sum_t' U_F[(k2,t),(0,t')] phi[(t',k1)]
    std::vector<Complex> psi(d2 * 2 * d1);
    for (std::size_t k2 = 0; k2 < d2; ++k2)
      for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t k1 = 0; k1 < d1; ++k1) {
          Complex s = 0.0;
          for (std::size_t tp = 0; tp < 2; ++tp)
            s += a.u_f(k2 * 2 + t, tp) * phi[tp * d1 + k1];
          psi[(k2 * 2 + t) * d1 + k1] = s;
        }

    double pz0 = 0.0, px0 = 0.0;
    for (std::size_t k2 = 0; k2 < d2; ++k2)
      for (std::size_t k1 = 0; k1 < d1; ++k1) {
        const Complex a0 = psi[(k2 * 2 + 0) * d1 + k1];
        const Complex a1 = psi[(k2 * 2 + 1) * d1 + k1];
        pz0 += std::norm(a0);
        px0 += 0.5 * std::norm(a0 + a1);
      }
    law.p0[kCtrl][prep][kZ] = pz0;
    law.p0[kCtrl][prep][kX] = px0;
  }
}

}  // namespace

OutcomeLaw outcome_law(const ChannelModel& channel) {
  channel.validate();
  OutcomeLaw law;
  switch (channel.kind) {
    case ChannelKind::ideal:
      for (int prep = 0; prep < 2; ++prep) {
        law.p0[kSift][prep][kZ] = prep == 0 ? 1.0 : 0.0;
        law.p0[kSift][prep][kX] = 0.5;
        law.p0[kCtrl][prep][kX] = prep == 0 ? 1.0 : 0.0;
        law.p0[kCtrl][prep][kZ] = 0.5;
      }
      break;
    case ChannelKind::symmetric_noise:
      for (int prep = 0; prep < 2; ++prep) {
        law.p0[kSift][prep][kZ] = prep == 0 ? 1.0 - channel.q_z : channel.q_z;
        law.p0[kSift][prep][kX] = 0.5;
        law.p0[kCtrl][prep][kX] = prep == 0 ? 1.0 - channel.q_x : channel.q_x;
        law.p0[kCtrl][prep][kZ] = 0.5;
      }
      break;
    case ChannelKind::attack:
      fill_sift_law(channel.attack, law);
      fill_ctrl_law(channel.attack, law);
      break;
  }
  return law;
}

std::vector<std::uint8_t> prepare_bob(std::size_t count, Rng& rng) {
  std::vector<std::uint8_t> out(count);
  for (auto& b : out) b = rng.coin() ? 1 : 0;
  return out;
}

std::vector<std::uint8_t> prepare_alice(std::size_t count, Rng& rng) {
  std::vector<std::uint8_t> out(count);
  for (auto& b : out) b = rng.coin() ? 1 : 0;
  return out;
}

std::vector<std::size_t> random_permutation(std::size_t count, Rng& rng) {
  std::vector<std::size_t> perm(count);
  for (std::size_t i = 0; i < count; ++i) perm[i] = i;
  for (std::size_t i = count; i > 1; --i)
    std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

namespace {

// One attempt of Steps 1-6; the caller handles the restart loop of Step 4.
ProtocolTranscript attempt_run(const ProtocolConfig& config, const OutcomeLaw& law,
                               const Rng& attempt_rng) {
  const std::size_t n = config.n;
  const std::size_t N = config.block_size();
  const std::size_t M = config.resolved_m();
  const std::size_t sent = 2 * N;

  Rng r_bob_prep = attempt_rng.stream(0);
  Rng r_alice_prep = attempt_rng.stream(1);
  Rng r_reorder = attempt_rng.stream(2);
  Rng r_basis = attempt_rng.stream(3);
  const Rng r_measure = attempt_rng.stream(4);
  Rng r_test = attempt_rng.stream(5);

  ProtocolTranscript t;
  t.bob_prepared = prepare_bob(N, r_bob_prep);
  t.alice_prepared = prepare_alice(M, r_alice_prep);
  t.permutation = random_permutation(N + M, r_reorder);
  t.sent_positions.assign(t.permutation.begin(), t.permutation.begin() + sent);

  t.bob_bases.resize(sent);
  for (std::size_t s = 0; s < sent; ++s) t.bob_bases[s] = r_basis.coin() ? Basis::x : Basis::z;

  t.bob_outcomes.resize(sent);
  for (std::size_t s = 0; s < sent; ++s) {
    const bool is_sift = t.slot_is_sift(s);
    const std::uint8_t prep = t.prepared_bit(s);
    const double p0 = law.p0[is_sift ? kSift : kCtrl][prep][static_cast<int>(t.bob_bases[s])];
    Rng r = r_measure.stream(s);
    t.bob_outcomes[s] = r.uniform() < p0 ? 0 : 1;
  }

  for (std::size_t s = 0; s < sent; ++s) {
    const bool is_sift = t.slot_is_sift(s);
    if (is_sift && t.bob_bases[s] == Basis::z) t.sift_z_indices.push_back(s);
    if (!is_sift && t.bob_bases[s] == Basis::x) t.ctrl_x_indices.push_back(s);
  }

  if (t.sift_z_indices.size() < 2 * n) {
    t.abort = AbortReason::insufficient_sift;
    return t;
  }

  // Step 5: reflected qubits measured in X must reproduce what Bob sent.
  std::size_t ctrl_errors = 0;
  for (std::size_t s : t.ctrl_x_indices)
    if (t.bob_outcomes[s] != t.prepared_bit(s)) ++ctrl_errors;
  t.q_x_est = t.ctrl_x_indices.empty()
                  ? 0.0
                  : static_cast<double>(ctrl_errors) / static_cast<double>(t.ctrl_x_indices.size());
  if (t.q_x_est > config.t_x) {
    t.abort = AbortReason::ctrl_threshold;
    return t;
  }

  // Step 6: Bob samples n test bits uniformly without replacement.
  std::vector<std::size_t> pool = t.sift_z_indices;
  for (std::size_t i = 0; i < n; ++i)
    std::swap(pool[i], pool[i + r_test.below(pool.size() - i)]);
  t.test_indices.assign(pool.begin(), pool.begin() + n);
  std::sort(t.test_indices.begin(), t.test_indices.end());

  std::size_t test_errors = 0;
  for (std::size_t s : t.test_indices)
    if (t.bob_outcomes[s] != t.prepared_bit(s)) ++test_errors;
  t.q_z_est = static_cast<double>(test_errors) / static_cast<double>(n);
  if (t.q_z_est > config.t_z) {
    t.abort = AbortReason::test_threshold;
    return t;
  }

  // Step 7: first n remaining sifted key slots.
  std::vector<bool> is_test(sent, false);
  for (std::size_t s : t.test_indices) is_test[s] = true;
  for (std::size_t s : t.sift_z_indices) {
    if (is_test[s]) continue;
    if (t.raw_key_a.size() == n) break;
    t.raw_key_a.push_back(t.prepared_bit(s));
    t.raw_key_b.push_back(t.bob_outcomes[s]);
  }
  return t;
}

}  // namespace

ProtocolTranscript run_protocol(const ProtocolConfig& config, const ChannelModel& channel) {
  config.validate();
  const OutcomeLaw law = outcome_law(channel);
  const Rng master(config.seed);

  ProtocolTranscript t;
  for (int attempt = 0; attempt <= config.retry_cap; ++attempt) {
    t = attempt_run(config, law, master.stream(attempt));
    t.attempts = attempt + 1;
    if (t.abort != AbortReason::insufficient_sift) return t;
  }
  return t;  // retries exhausted, abort == insufficient_sift
}

std::optional<double> EmpiricalStats::p_a(int i, int j) const {
  const std::uint64_t total = a_row_total(i);
  if (total == 0) return std::nullopt;
  return static_cast<double>(a_counts[i][j]) / static_cast<double>(total);
}

std::optional<double> EmpiricalStats::p_b(int i, int j) const {
  const std::uint64_t total = b_row_total(i);
  if (total == 0) return std::nullopt;
  return static_cast<double>(b_counts[i][j]) / static_cast<double>(total);
}

std::optional<ChannelStats> EmpiricalStats::to_channel_stats() const {
  ChannelStats s;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto pa = p_a(i, j);
      const auto pb = p_b(i, j);
      if (!pa || !pb) return std::nullopt;
      s.p_a[i][j] = *pa;
      s.p_b[i][j] = *pb;
    }
  return s;
}

EmpiricalStats estimate_stats(const std::vector<ProtocolTranscript>& transcripts) {
  if (transcripts.empty())
    throw std::domain_error("estimate_stats: need at least one transcript");
  EmpiricalStats e;
  for (const ProtocolTranscript& t : transcripts) {
    for (std::size_t s : t.sift_z_indices)
      ++e.a_counts[t.prepared_bit(s)][t.bob_outcomes[s]];
    for (std::size_t s : t.ctrl_x_indices)
      ++e.b_counts[t.prepared_bit(s)][t.bob_outcomes[s]];
  }
  return e;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial) {
  return Rng(master_seed).stream(trial).seed();
}

EndToEndReport end_to_end_rate(const ProtocolConfig& config, const ChannelModel& channel,
                               std::size_t trials, unsigned jobs) {
  if (trials == 0) throw std::domain_error("end_to_end_rate: trials must be >= 1");
  config.validate();

  std::vector<ProtocolTranscript> transcripts(trials);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      ProtocolConfig c = config;
      c.seed = trial_seed(config.seed, i);
      transcripts[i] = run_protocol(c, channel);
    }
  };

  if (jobs <= 1 || trials == 1) {
    run_range(0, trials);
  } else {
    const unsigned workers = std::min<unsigned>(jobs, static_cast<unsigned>(trials));
    std::vector<std::thread> pool;
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(trials, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  EndToEndReport report;
  report.trials = trials;
  std::vector<ProtocolTranscript> completed;
  completed.reserve(trials);
  for (auto& t : transcripts) {
    if (t.abort == AbortReason::none)
      completed.push_back(std::move(t));
    else
      ++report.aborts;
  }
  report.abort_rate = static_cast<double>(report.aborts) / static_cast<double>(trials);

  if (!completed.empty()) {
    for (const auto& t : completed) {
      report.mean_q_z += t.q_z_est;
      report.mean_q_x += t.q_x_est;
    }
    report.mean_q_z /= static_cast<double>(completed.size());
    report.mean_q_x /= static_cast<double>(completed.size());
    report.pooled = estimate_stats(completed);
    if (auto stats = report.pooled.to_channel_stats())
      report.r_tilde_from_estimates = keyrate_bound(*stats).r_tilde;
  }
  return report;
}

}  // namespace sqkd
