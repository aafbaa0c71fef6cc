#include <benchmark/benchmark.h>

#include "sqkd/attack.hpp"
#include "sqkd/keyrate.hpp"
#include "sqkd/protocol.hpp"
#include "sqkd/qmath.hpp"
#include "sqkd/rng.hpp"

using namespace sqkd;

static void BM_HermitianEigenvalues(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(7);
  ComplexMatrix g(n, n);
  for (auto& v : g.data) v = Complex(rng.gaussian(), rng.gaussian());
  const ComplexMatrix h = g * g.dagger();
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(h));
}
BENCHMARK(BM_HermitianEigenvalues)->Arg(4)->Arg(8)->Arg(16);

static void BM_KeyrateBound(benchmark::State& state) {
  const ChannelStats stats = symmetric_stats({0.03, 0.03});
  for (auto _ : state) benchmark::DoNotOptimize(keyrate_bound(stats));
}
BENCHMARK(BM_KeyrateBound);

static void BM_ThresholdQ(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(threshold_q(1.0, 1.0));
}
BENCHMARK(BM_ThresholdQ);

static void BM_AttackAnalysis(benchmark::State& state) {
  // Full per-sample cost of the verification campaign at d1 = d2 = 2.
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const AttackPair attack = sample_random_attack(seed++, 2, 2);
    const SiftDecomposition sd = decompose_sift(attack);
    benchmark::DoNotOptimize(exact_eve_rate(sd));
    benchmark::DoNotOptimize(keyrate_bound(channel_stats(attack)).r_tilde);
  }
}
BENCHMARK(BM_AttackAnalysis);

static void BM_ProtocolRun(benchmark::State& state) {
  ProtocolConfig config;
  config.n = static_cast<std::size_t>(state.range(0));
  config.delta = 0.25;
  config.t_x = config.t_z = 1.0;
  const ChannelModel channel = ChannelModel::make_attack(sample_random_attack(3, 2, 2));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = seed++;
    benchmark::DoNotOptimize(run_protocol(config, channel));
  }
}
BENCHMARK(BM_ProtocolRun)->Arg(64)->Arg(512);

BENCHMARK_MAIN();
