#pragma once

// Small dense complex linear algebra and entropy functions for joint quantum
// systems of dimension <= 64. Everything here is a pure function of its
// inputs; values are immutable after construction and safe to share across
// threads.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "sqkd/tolerances.hpp"

namespace sqkd {

using Complex = std::complex<double>;

// Column vector of complex amplitudes. Sub-normalized vectors are permitted
// (the ancilla-component vectors extracted from an attack are typically not
// unit vectors); use is_normalized() where unit norm is required.
struct StateVector {
  std::vector<Complex> amp;

  StateVector() = default;
  explicit StateVector(std::size_t dim) : amp(dim) {}
  StateVector(std::initializer_list<Complex> a) : amp(a) {}

  static StateVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const { return amp.size(); }
  Complex& operator[](std::size_t i) { return amp[i]; }
  const Complex& operator[](std::size_t i) const { return amp[i]; }

  bool is_normalized(const Tolerances& tol = default_tolerances()) const;
};

Complex inner(const StateVector& a, const StateVector& b);  // <a|b>
double norm2(const StateVector& v);                         // <v|v>
StateVector tensor(const StateVector& a, const StateVector& b);
StateVector add(const StateVector& a, const StateVector& b);
StateVector sub(const StateVector& a, const StateVector& b);
StateVector scale(Complex c, const StateVector& v);

// Dense row-major complex matrix.
struct ComplexMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Complex> data;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  static ComplexMatrix identity(std::size_t n);

  Complex& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  ComplexMatrix dagger() const;
  double trace_real() const;

  bool is_unitary(const Tolerances& tol = default_tolerances()) const;
  bool is_hermitian(const Tolerances& tol = default_tolerances()) const;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(Complex c, const ComplexMatrix& m);
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix outer(const StateVector& v);  // |v><v|
StateVector apply(const ComplexMatrix& m, const StateVector& v);
double max_abs(const ComplexMatrix& m);

// Shannon entropy in bits, with 0 log 0 := 0. Entries must be >= 0; they may
// form a sub-distribution (weighted entropy terms are legitimate inputs).
// Throws std::domain_error on a negative entry.
double shannon_entropy(std::span<const double> probs);
double shannon_entropy(std::initializer_list<double> probs);

// Binary entropy h(p) in bits for p in [0, 1]; throws std::domain_error
// outside that range.
double binary_entropy(double p);

// Real spectrum of a Hermitian matrix, sorted descending. Cyclic Jacobi
// sweeps, stopping when the off-diagonal Frobenius norm drops below
// tol.jacobi_off_norm. Throws std::domain_error if the input is not
// Hermitian within tol.hermiticity.
std::vector<double> hermitian_eigenvalues(
    const ComplexMatrix& m, const Tolerances& tol = default_tolerances());

// von Neumann entropy S(rho) in bits: Shannon entropy of the spectrum.
// Eigenvalues in [-tol.psd_floor, 0) are clamped to 0; anything below
// -tol.psd_floor is rejected as not positive semidefinite.
double von_neumann_entropy(const ComplexMatrix& rho,
                           const Tolerances& tol = default_tolerances());

// Reduced density matrix over the kept subsystems. `dims` lists the factor
// dimensions in row-major (leftmost-major) order; their product must equal
// the matrix dimension. `keep` holds factor indices to retain, in increasing
// order of significance as listed in `dims`.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

// S(A|B) = S(AB) - S(B) where A is the set of factors in `subsystem_a` and
// B is everything else. May be negative for entangled states.
double conditional_entropy(const ComplexMatrix& rho_ab,
                           std::span<const std::size_t> dims,
                           std::span<const std::size_t> subsystem_a,
                           const Tolerances& tol = default_tolerances());

}  // namespace sqkd
