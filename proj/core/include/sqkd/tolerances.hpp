#pragma once

namespace sqkd {

// All numerical tolerances in one place. Functions that validate inputs take
// a Tolerances argument defaulting to default_tolerances(), so tests can
// tighten or loosen individual knobs.
struct Tolerances {
  double unitarity = 1e-9;       // max-norm of U*U - I for "unitary" matrices
  double hermiticity = 1e-10;    // max-norm of rho - rho* for "density" inputs
  double psd_floor = 1e-10;      // eigenvalues in [-psd_floor, 0) clamp to 0; below is rejected
  double trace = 1e-10;          // deviation of a density matrix from its declared trace
  double normalization = 1e-10;  // |<psi|psi> - 1| for normalized state vectors
  double constraint = 1e-9;      // decomposition constraint equations and probability row sums
  double jacobi_off_norm = 1e-12;  // off-diagonal Frobenius norm at which the eigensolver stops
  double zero_vector_norm2 = 1e-12;  // squared norm below which an ancilla vector counts as zero
  double bound_slack = 1e-9;     // slack allowed when comparing rates against the closed-form bound
  double root_residual = 1e-12;  // |r(Q)| at which bisection stops early
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace sqkd
