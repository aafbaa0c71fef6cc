#include "sqkd/attack.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sqkd/keyrate.hpp"

namespace sqkd {

AttackPair AttackPair::identity(std::size_t d1, std::size_t d2) {
  AttackPair a;
  a.d1 = d1;
  a.d2 = d2;
  a.u_e = ComplexMatrix::identity(2 * d1);
  a.u_f = ComplexMatrix::identity(d2 * 2);
  return a;
}

void AttackPair::validate(const Tolerances& tol) const {
  if (d1 == 0 || d2 == 0) throw std::domain_error("AttackPair: ancilla dimension 0");
  if (u_e.rows != 2 * d1 || u_e.cols != 2 * d1)
    throw std::domain_error("AttackPair: u_e has wrong dimension");
  if (u_f.rows != d2 * 2 || u_f.cols != d2 * 2)
    throw std::domain_error("AttackPair: u_f has wrong dimension");
  if (!u_e.is_unitary(tol)) throw std::domain_error("AttackPair: u_e not unitary");
  if (!u_f.is_unitary(tol)) throw std::domain_error("AttackPair: u_f not unitary");
}

SiftDecomposition decompose_sift(const AttackPair& attack, const Tolerances& tol) {
  attack.validate(tol);
  const std::size_t d2 = attack.d2;
  SiftDecomposition out;
  // Column of U_F for input |0>_{E2} |i>_T is index i; the E2 component
  // multiplying |j>_T sits at rows k*2 + j.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      StateVector v(d2);
      for (std::size_t k = 0; k < d2; ++k) v[k] = attack.u_f(k * 2 + j, i);
      out.e_a[i][j] = std::move(v);
    }
  return out;
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// E1 components of U_E |i>_T |0>_{E1} in the X basis of the transit factor.
// xin: 0 = |+>, 1 = |->.
std::array<StateVector, 2> u_e_x_components(const AttackPair& attack, int xin) {
  const std::size_t d1 = attack.d1;
  StateVector in(2 * d1);
  in[0 * d1 + 0] = kInvSqrt2;
  in[1 * d1 + 0] = (xin == 0 ? kInvSqrt2 : -kInvSqrt2);
  const StateVector y = apply(attack.u_e, in);

  std::array<StateVector, 2> comps{StateVector(d1), StateVector(d1)};
  for (std::size_t k = 0; k < d1; ++k) {
    comps[0][k] = (y[0 * d1 + k] + y[1 * d1 + k]) * kInvSqrt2;  // onto |+>
    comps[1][k] = (y[0 * d1 + k] - y[1 * d1 + k]) * kInvSqrt2;  // onto |->
  }
  return comps;
}

}  // namespace

CtrlDecomposition decompose_ctrl(const AttackPair& attack, const Tolerances& tol) {
  attack.validate(tol);
  const SiftDecomposition sd = decompose_sift(attack, tol);

  CtrlDecomposition out;
  for (int xin = 0; xin < 2; ++xin) {
    auto comps = u_e_x_components(attack, xin);
    out.e_b[xin][0] = std::move(comps[0]);
    out.e_b[xin][1] = std::move(comps[1]);
  }

  // f_{2i+j} = e00 (x) (B_i+ + s B_i-) + s' e01 (x) (B_i+ + s B_i-)
  //          + e10 (x) (B_i+ - s B_i-) + s' e11 (x) (B_i+ - s B_i-)
  // with s = +1 and the e01/e11 sign s' = +1 for j = 0 (projection onto |+>)
  // and s' = -1 for j = 1.
  for (int i = 0; i < 2; ++i) {
    const StateVector bsum = add(out.e_b[i][0], out.e_b[i][1]);
    const StateVector bdiff = sub(out.e_b[i][0], out.e_b[i][1]);
    for (int j = 0; j < 2; ++j) {
      const double sign = (j == 0 ? 1.0 : -1.0);
      StateVector f = tensor(sd.e_a[0][0], bsum);
      f = add(f, scale(sign, tensor(sd.e_a[0][1], bsum)));
      f = add(f, tensor(sd.e_a[1][0], bdiff));
      f = add(f, scale(sign, tensor(sd.e_a[1][1], bdiff)));
      out.f[2 * i + j] = std::move(f);
    }
  }
  return out;
}

ChannelStats channel_stats(const AttackPair& attack, const Tolerances& tol) {
  const SiftDecomposition sd = decompose_sift(attack, tol);
  const CtrlDecomposition cd = decompose_ctrl(attack, tol);

  ChannelStats stats;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) stats.p_a[i][j] = norm2(sd.e_a[i][j]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) stats.p_b[i][j] = 0.25 * norm2(cd.f[2 * i + j]);
  stats.validate(tol);
  return stats;
}

ComplexMatrix rho_be2(const SiftDecomposition& d) {
  const std::size_t d2 = d.e_a[0][0].dim();
  ComplexMatrix rho(2 * d2, 2 * d2);
  for (int b = 0; b < 2; ++b) {
    // Bob's bit b collects the e_a[.][b] components from both key values.
    const ComplexMatrix block = outer(d.e_a[0][b]) + outer(d.e_a[1][b]);
    for (std::size_t r = 0; r < d2; ++r)
      for (std::size_t c = 0; c < d2; ++c)
        rho(b * d2 + r, b * d2 + c) = 0.5 * block(r, c);
  }
  return rho;
}

double exact_eve_rate(const SiftDecomposition& d, const Tolerances& tol) {
  const ComplexMatrix rho = rho_be2(d);
  const std::size_t dims_arr[2] = {2, d.e_a[0][0].dim()};
  const std::size_t b_factor[1] = {0};
  const double s_b_given_e2 = conditional_entropy(rho, dims_arr, b_factor, tol);

  const double h_ba = shannon_entropy({0.5 * norm2(d.e_a[0][0]), 0.5 * norm2(d.e_a[0][1]),
                                       0.5 * norm2(d.e_a[1][0]), 0.5 * norm2(d.e_a[1][1])}) -
                      1.0;
  return s_b_given_e2 - h_ba;
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  ComplexMatrix g(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      g(r, c) = Complex(rng.gaussian(), rng.gaussian()) * kInvSqrt2;

  // Modified Gram-Schmidt on columns, two projection passes per column.
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < j; ++i) {
        Complex p = 0.0;
        for (std::size_t r = 0; r < n; ++r) p += std::conj(g(r, i)) * g(r, j);
        for (std::size_t r = 0; r < n; ++r) g(r, j) -= p * g(r, i);
      }
    double nrm = 0.0;
    for (std::size_t r = 0; r < n; ++r) nrm += std::norm(g(r, j));
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < n; ++r) g(r, j) /= nrm;
  }
  return g;
}

AttackPair sample_random_attack(std::uint64_t seed, std::size_t d1, std::size_t d2) {
  auto supported = [](std::size_t d) { return d == 1 || d == 2 || d == 4; };
  if (!supported(d1) || !supported(d2))
    throw std::domain_error("sample_random_attack: ancilla dimension must be 1, 2 or 4");

  Rng rng(seed);
  Rng rng_e = rng.stream(0);
  Rng rng_f = rng.stream(1);

  AttackPair a;
  a.d1 = d1;
  a.d2 = d2;
  a.u_e = random_unitary(2 * d1, rng_e);
  a.u_f = random_unitary(d2 * 2, rng_f);
  return a;
}

OverlapReport check_overlap_inequality(const AttackPair& attack, const Tolerances& tol) {
  const SiftDecomposition sd = decompose_sift(attack, tol);
  OverlapReport report;
  report.lhs = std::abs(inner(sd.e_a[0][0], sd.e_a[1][1]));
  report.rhs = c_lower_bound(channel_stats(attack, tol));
  report.holds = report.lhs >= report.rhs - tol.bound_slack;
  return report;
}

}  // namespace sqkd
