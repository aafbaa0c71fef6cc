#include "sqkd/keyrate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sqkd/qmath.hpp"

namespace sqkd {

void ChannelStats::validate(const Tolerances& tol) const {
  for (const auto& table : {p_a, p_b})
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j)
        if (table[i][j] < -tol.constraint || table[i][j] > 1.0 + tol.constraint)
          throw std::domain_error("ChannelStats: entry outside [0,1]");
      if (std::abs(table[i][0] + table[i][1] - 1.0) > tol.constraint)
        throw std::domain_error("ChannelStats: row does not sum to 1");
    }
}

double h_b_given_a(const ChannelStats& stats) {
  const auto& p = stats.p_a;
  return shannon_entropy(
             {0.5 * p[0][0], 0.5 * p[0][1], 0.5 * p[1][0], 0.5 * p[1][1]}) -
         1.0;
}

double c_lower_bound(const ChannelStats& stats) {
  const auto& a = stats.p_a;
  const auto& b = stats.p_b;
  const double xb = std::sqrt(b[0][0] * b[0][1]) + std::sqrt(b[1][0] * b[1][1]);
  return 1.0 - (b[0][1] + b[1][0]) - 2.0 * std::sqrt(a[0][0] * a[0][1]) * xb -
         2.0 * std::sqrt(a[1][0] * a[1][1]) * xb;
}

double lambda_tilde(const ChannelStats& stats, double c_tilde, const Tolerances& tol) {
  const double p00 = stats.p_a[0][0];
  const double p11 = stats.p_a[1][1];
  const double t1 = p00 + p11;
  if (t1 <= 0.0)
    throw std::domain_error("lambda_tilde: degenerate channel (p00 + p11 = 0)");
  if (c_tilde < 0.0 || c_tilde > 1.0)
    throw std::domain_error("lambda_tilde: c_tilde outside [0,1]");

  const double lam =
      0.5 + std::sqrt((p00 - p11) * (p00 - p11) + 4.0 * c_tilde) / (2.0 * t1);
  if (lam > 1.0 + tol.bound_slack)
    throw std::domain_error("lambda_tilde: value " + std::to_string(lam) +
                            " exceeds 1 beyond numerical slack");
  return std::min(lam, 1.0);
}

KeyRateBound keyrate_bound(const ChannelStats& stats, const Tolerances& tol) {
  stats.validate(tol);

  KeyRateBound out;
  out.c = c_lower_bound(stats);
  out.c_tilde = out.c > 0.0 ? out.c * out.c : 0.0;
  out.h_ba = h_b_given_a(stats);
  out.t1 = stats.p_a[0][0] + stats.p_a[1][1];
  out.t2 = stats.p_a[0][1] + stats.p_a[1][0];

  double sigma1_term = 0.0;
  if (out.t1 > 0.0) {
    out.lambda_tilde = lambda_tilde(stats, out.c_tilde, tol);
    sigma1_term = 0.5 * out.t1 * binary_entropy(out.lambda_tilde);
  } else {
    // Degenerate channel: the whole "agree" block is absent, so its entropy
    // term is dropped rather than evaluated with an undefined lambda~.
    out.lambda_tilde = 1.0;
  }

  out.r_tilde = 1.0 - shannon_entropy({0.5 * out.t1, 0.5 * out.t2}) -
                0.5 * out.t2 - sigma1_term;
  return out;
}

ChannelStats symmetric_stats(const SymmetricNoise& noise) {
  if (noise.q_z < 0.0 || noise.q_z > 0.5 || noise.q_x < 0.0 || noise.q_x > 0.5)
    throw std::domain_error("symmetric_stats: error rates must lie in [0, 1/2]");
  ChannelStats s;
  s.p_a = {{{1.0 - noise.q_z, noise.q_z}, {noise.q_z, 1.0 - noise.q_z}}};
  s.p_b = {{{1.0 - noise.q_x, noise.q_x}, {noise.q_x, 1.0 - noise.q_x}}};
  return s;
}

namespace {

double symmetric_rate(double zeta, double xi, double q, const Tolerances& tol) {
  return keyrate_bound(symmetric_stats({zeta * q, xi * q}), tol).r_tilde;
}

}  // namespace

double threshold_q(double zeta, double xi, const Tolerances& tol) {
  if (zeta <= 0.0 || xi <= 0.0)
    throw std::domain_error("threshold_q: multipliers must be positive");

  // Error rates above 1/2 are relabeling artifacts; cap the search there.
  double lo = 0.0;
  double hi = 0.5 / std::max(zeta, xi);
  double f_lo = symmetric_rate(zeta, xi, lo, tol);
  double f_hi = symmetric_rate(zeta, xi, hi, tol);
  if (f_lo <= 0.0)
    throw std::domain_error("threshold_q: no positive-rate region at Q = 0");
  if (f_hi >= 0.0)
    throw std::runtime_error("threshold_q: rate does not change sign on (0, Qmax]");

  // 80 halvings shrink the interval below 1e-20; the rate is cheap and
  // smooth, so plain bisection is plenty.
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = symmetric_rate(zeta, xi, mid, tol);
    if (std::abs(f_mid) <= tol.root_residual) return mid;
    if (f_mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<RatePoint> rate_curve(double zeta, double xi, double q_max,
                                  std::size_t steps, const Tolerances& tol) {
  if (steps < 2) throw std::domain_error("rate_curve: steps must be >= 2");
  if (q_max < 0.0 || zeta * q_max > 0.5 || xi * q_max > 0.5)
    throw std::domain_error("rate_curve: q_max pushes an error rate outside [0, 1/2]");

  std::vector<RatePoint> curve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    const double q = q_max * static_cast<double>(i) / static_cast<double>(steps - 1);
    curve[i] = {q, symmetric_rate(zeta, xi, q, tol)};
  }
  return curve;
}

}  // namespace sqkd
