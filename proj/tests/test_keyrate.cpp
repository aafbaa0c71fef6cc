#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sqkd/keyrate.hpp"
#include "sqkd/qmath.hpp"
#include "sqkd/rng.hpp"

using namespace sqkd;

namespace {

// Thresholds computed once with 50-digit decimal arithmetic (independent
// bisection on the same closed form), truncated to 12 decimals.
struct GoldenThreshold {
  double zeta, xi, q;
};
constexpr GoldenThreshold kGolden[] = {
    {0.5, 0.5, 0.089103454917}, {0.5, 1.0, 0.065723817338}, {0.5, 2.0, 0.047073544836},
    {1.0, 0.5, 0.058978717565}, {1.0, 1.0, 0.044551727458}, {1.0, 2.0, 0.032861908669},
    {2.0, 0.5, 0.038344338329}, {2.0, 1.0, 0.029489358782}, {2.0, 2.0, 0.022275863729},
};

}  // namespace

TEST_SUITE("keyrate") {

TEST_CASE("H(B|A) for noiseless, uniform and symmetric statistics") {
  CHECK(h_b_given_a(ChannelStats::noiseless()) == doctest::Approx(0.0).epsilon(1e-12));

  ChannelStats uniform;
  uniform.p_a = {{{0.5, 0.5}, {0.5, 0.5}}};
  uniform.p_b = {{{0.5, 0.5}, {0.5, 0.5}}};
  CHECK(h_b_given_a(uniform) == doctest::Approx(1.0).epsilon(1e-12));

  for (double q = 0.01; q <= 0.25; q += 0.02)
    CHECK(h_b_given_a(symmetric_stats({q, q})) ==
          doctest::Approx(binary_entropy(q)).epsilon(1e-12));
}

TEST_CASE("overlap bound C: trivial value, symmetric simplification, sign") {
  CHECK(c_lower_bound(ChannelStats::noiseless()) == doctest::Approx(1.0).epsilon(1e-12));

  for (double qz = 0.0; qz <= 0.3; qz += 0.05)
    for (double qx = 0.0; qx <= 0.3; qx += 0.05) {
      const double simplified =
          1.0 - 2.0 * qx - 8.0 * std::sqrt(qz * (1.0 - qz) * qx * (1.0 - qx));
      CHECK(c_lower_bound(symmetric_stats({qz, qx})) ==
            doctest::Approx(simplified).epsilon(1e-12));
    }

  CHECK(c_lower_bound(symmetric_stats({0.25, 0.25})) < 0.0);
}

TEST_CASE("lambda~: endpoints, golden value, degenerate and overflow errors") {
  CHECK(lambda_tilde(ChannelStats::noiseless(), 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  // Equal diagonal entries with no overlap knowledge pin lambda~ at 1/2.
  CHECK(lambda_tilde(symmetric_stats({0.1, 0.1}), 0.0) ==
        doctest::Approx(0.5).epsilon(1e-15));

  const KeyRateBound at_table_point = keyrate_bound(symmetric_stats({0.0446, 0.0446}));
  CHECK(at_table_point.lambda_tilde ==
        doctest::Approx(0.798258990998535).epsilon(1e-12));

  ChannelStats bitflip;
  bitflip.p_a = {{{0.0, 1.0}, {1.0, 0.0}}};
  bitflip.p_b = {{{1.0, 0.0}, {0.0, 1.0}}};
  CHECK_THROWS_AS((void)lambda_tilde(bitflip, 0.0), std::domain_error);

  // Z noise without any X disturbance is not realizable by an attack; the
  // closed form then pushes lambda~ beyond 1 and must be rejected.
  CHECK_THROWS_AS((void)keyrate_bound(symmetric_stats({0.3, 0.0})), std::domain_error);
}

TEST_CASE("key-rate bound: trivial and golden evaluations") {
  const KeyRateBound clean = keyrate_bound(ChannelStats::noiseless());
  CHECK(clean.r_tilde == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(clean.c == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(clean.c_tilde == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(clean.lambda_tilde == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(clean.h_ba == doctest::Approx(0.0).epsilon(1e-12));

  // 50-digit decimal evaluation of the closed form at Q_Z = Q_X = 2%.
  CHECK(keyrate_bound(symmetric_stats({0.02, 0.02})).r_tilde ==
        doctest::Approx(0.410151822059443).epsilon(1e-12));

  // The 4.46% table entry is the 2-decimal rounding of the true root
  // 0.0445517...; at the rounded point the bound is within 1e-3 of zero,
  // and at the root itself it vanishes.
  CHECK(std::abs(keyrate_bound(symmetric_stats({0.0446, 0.0446})).r_tilde) < 1e-3);
  const double root = threshold_q(1.0, 1.0);
  CHECK(std::abs(keyrate_bound(symmetric_stats({root, root})).r_tilde) < 1e-9);

  // Fully depolarizing Z statistics: the sigma_1 block is absent and the
  // bound collapses without needing lambda~.
  ChannelStats bitflip;
  bitflip.p_a = {{{0.0, 1.0}, {1.0, 0.0}}};
  bitflip.p_b = {{{1.0, 0.0}, {0.0, 1.0}}};
  const KeyRateBound kb = keyrate_bound(bitflip);
  CHECK(kb.lambda_tilde == 1.0);
  CHECK(kb.r_tilde == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("symmetric statistics construction") {
  const ChannelStats id = symmetric_stats({0.0, 0.0});
  CHECK(id.p_a[0][0] == 1.0);
  CHECK(id.p_b[1][1] == 1.0);

  const ChannelStats uniform = symmetric_stats({0.5, 0.5});
  CHECK(uniform.p_a[0][0] == 0.5);
  CHECK(uniform.p_b[0][1] == 0.5);

  const ChannelStats s = symmetric_stats({0.05, 0.02});
  CHECK(s.p_a[0][1] == doctest::Approx(0.05));
  CHECK(s.p_a[1][1] == doctest::Approx(0.95));
  CHECK(s.p_b[1][0] == doctest::Approx(0.02));

  CHECK_THROWS_AS((void)symmetric_stats({0.6, 0.0}), std::domain_error);
  CHECK_THROWS_AS((void)symmetric_stats({0.0, -0.01}), std::domain_error);
}

TEST_CASE("threshold solver agrees with the high-precision oracle") {
  for (const GoldenThreshold& g : kGolden) {
    const double root = threshold_q(g.zeta, g.xi);
    CHECK(std::abs(root - g.q) < 1e-9);
    // The root is an actual sign change of a residual below 1e-9.
    const double at_root =
        keyrate_bound(symmetric_stats({g.zeta * root, g.xi * root})).r_tilde;
    CHECK(std::abs(at_root) <= 1e-9);
    const double left =
        keyrate_bound(symmetric_stats({g.zeta * (root - 1e-6), g.xi * (root - 1e-6)}))
            .r_tilde;
    const double right =
        keyrate_bound(symmetric_stats({g.zeta * (root + 1e-6), g.xi * (root + 1e-6)}))
            .r_tilde;
    CHECK(left > 0.0);
    CHECK(right < 0.0);
  }

  CHECK_THROWS_AS((void)threshold_q(0.0, 1.0), std::domain_error);
}

TEST_CASE("threshold scaling: doubling both multipliers halves the root") {
  // The rays (zeta, xi) and (2 zeta, 2 xi) trace the same line in the
  // (Q_Z, Q_X) plane, so this holds for any rate function whatsoever.
  for (const auto& [zeta, xi] : {std::pair{0.5, 0.5}, {1.0, 0.5}, {0.7, 1.3}}) {
    CHECK(threshold_q(2.0 * zeta, 2.0 * xi) ==
          doctest::Approx(0.5 * threshold_q(zeta, xi)).epsilon(1e-9));
  }
}

TEST_CASE("rate curve: endpoints, monotonicity and crossings") {
  const auto curve = rate_curve(0.5, 0.5, 0.10, 101);
  REQUIRE(curve.size() == 101);
  CHECK(curve.front().q == 0.0);
  CHECK(curve.front().r_tilde == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(curve.back().q == doctest::Approx(0.10).epsilon(1e-15));

  const double threshold = threshold_q(0.5, 0.5);
  double prev = curve.front().r_tilde;
  double crossing = -1.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].q <= threshold) CHECK(curve[i].r_tilde <= prev + 1e-12);
    if (crossing < 0.0 && curve[i].r_tilde < 0.0 && prev >= 0.0)
      crossing = 0.5 * (curve[i - 1].q + curve[i].q);
    prev = curve[i].r_tilde;
  }
  CHECK(std::abs(crossing - 0.089103454917) < 0.001);  // grid resolution 1e-3

  const auto curve2 = rate_curve(1.0, 2.0, 0.05, 51);
  double cross2 = -1.0;
  for (std::size_t i = 1; i < curve2.size(); ++i)
    if (cross2 < 0.0 && curve2[i].r_tilde < 0.0 && curve2[i - 1].r_tilde >= 0.0)
      cross2 = 0.5 * (curve2[i - 1].q + curve2[i].q);
  CHECK(std::abs(cross2 - 0.032861908669) < 0.001);

  const auto degenerate = rate_curve(1.0, 1.0, 0.0, 2);
  REQUIRE(degenerate.size() == 2);
  CHECK(degenerate[0].r_tilde == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(degenerate[1].r_tilde == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS((void)rate_curve(1.0, 1.0, 0.1, 1), std::domain_error);
  CHECK_THROWS_AS((void)rate_curve(2.0, 1.0, 0.3, 5), std::domain_error);
}

TEST_CASE("bound never exceeds 1 and reaches 1 only without noise") {
  CHECK(keyrate_bound(ChannelStats::noiseless()).r_tilde == doctest::Approx(1.0));
  Rng rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    // Keep q_x >= q_z/2 so the pair is realizable (Z noise cannot come for
    // free in the X basis; far outside that region lambda~ would exceed 1).
    const double qz = 0.30 * rng.uniform();
    const double qx = 0.5 * qz + (0.45 - 0.5 * qz) * rng.uniform();
    const KeyRateBound kb = keyrate_bound(symmetric_stats({qz, qx}));
    CHECK(kb.r_tilde <= 1.0 + 1e-12);
    if (qz > 1e-3 || qx > 1e-3) CHECK(kb.r_tilde < 1.0);
  }
}

TEST_CASE("symmetric specialization matches the hand-simplified expression") {
  for (double q = 0.0; q <= 0.25; q += 0.01) {
    const double c = 1.0 - 2.0 * q - 8.0 * q * (1.0 - q);
    const double lam = 0.5 + std::max(c, 0.0) / (2.0 * (1.0 - q));
    const double by_hand =
        1.0 - binary_entropy(q) - q - (1.0 - q) * binary_entropy(lam);
    CHECK(keyrate_bound(symmetric_stats({q, q})).r_tilde ==
          doctest::Approx(by_hand).epsilon(1e-12));
  }
}

TEST_CASE("lambda~ is monotone non-decreasing in c_tilde") {
  const ChannelStats stats = symmetric_stats({0.07, 0.03});
  double prev = lambda_tilde(stats, 0.0);
  for (double ct = 0.05; ct <= 0.85; ct += 0.05) {
    const double lam = lambda_tilde(stats, ct);
    CHECK(lam >= prev - 1e-15);
    prev = lam;
  }
}

}  // TEST_SUITE
