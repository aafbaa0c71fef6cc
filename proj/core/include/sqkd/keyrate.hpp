#pragma once

// Closed-form lower bound on the asymptotic secret-key rate, computable from
// the observable statistics alone, plus the symmetric-noise specialization
// and the noise-threshold solver.

#include <vector>

#include "sqkd/stats.hpp"
#include "sqkd/tolerances.hpp"

namespace sqkd {

struct KeyRateBound {
  double c = 0.0;             // statistics-only overlap lower bound C (may be negative)
  double c_tilde = 0.0;       // max(C, 0)^2
  double lambda_tilde = 1.0;  // dominant eigenvalue bound of the "agree" block, in [1/2, 1]
  double h_ba = 0.0;          // H(B|A) in bits
  double t1 = 0.0;            // p_a[0][0] + p_a[1][1]
  double t2 = 0.0;            // p_a[0][1] + p_a[1][0]
  double r_tilde = 0.0;       // bound in bits per sifted bit; may be negative
};

struct SymmetricNoise {
  double q_z = 0.0;  // Z-basis error rate, in [0, 1/2]
  double q_x = 0.0;  // X-basis error rate, in [0, 1/2]
};

// H(B|A) = H(p_a/2 entries) - 1, in [0, 1].
double h_b_given_a(const ChannelStats& stats);

// The overlap lower bound C as a function of the statistics. Always <= 1;
// negative values are meaningful and are clamped only when squared into
// c_tilde downstream.
double c_lower_bound(const ChannelStats& stats);

// lambda~ = 1/2 + sqrt((p00 - p11)^2 + 4*c_tilde) / (2 (p00 + p11)).
// Requires p00 + p11 > 0 (otherwise the term this feeds is dropped entirely;
// passing a degenerate channel here throws std::domain_error). Values above
// 1 by more than tol.bound_slack throw; within slack they clamp to 1.
double lambda_tilde(const ChannelStats& stats, double c_tilde,
                    const Tolerances& tol = default_tolerances());

// r~ = 1 - H(t1/2, t2/2) - t2/2 - (t1/2) h(lambda~), with the lambda~ term
// dropped when t1 = 0 (lambda_tilde is reported as 1 in that case, which
// makes h vanish and is the same thing).
KeyRateBound keyrate_bound(const ChannelStats& stats,
                           const Tolerances& tol = default_tolerances());

// p_a = [[1-Qz, Qz], [Qz, 1-Qz]], p_b = [[1-Qx, Qx], [Qx, 1-Qx]].
// Throws std::domain_error if either rate leaves [0, 1/2].
ChannelStats symmetric_stats(const SymmetricNoise& noise);

// Smallest positive root of r~(Q_z = zeta*Q, Q_x = xi*Q) = 0, found by
// bisection on (0, Qmax] where Qmax keeps both rates <= 1/2. Throws
// std::domain_error if no positive-rate region exists at the left edge and
// std::runtime_error if the bracket fails.
double threshold_q(double zeta, double xi,
                   const Tolerances& tol = default_tolerances());

struct RatePoint {
  double q = 0.0;
  double r_tilde = 0.0;
};

// r~ sampled on `steps` uniformly spaced Q values over [0, q_max].
// Requires steps >= 2 and zeta*q_max, xi*q_max <= 1/2.
std::vector<RatePoint> rate_curve(double zeta, double xi, double q_max,
                                  std::size_t steps,
                                  const Tolerances& tol = default_tolerances());

}  // namespace sqkd
