#include "sqkd/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace sqkd {

StateVector StateVector::basis(std::size_t dim, std::size_t k) {
  StateVector v(dim);
  v.amp[k] = 1.0;
  return v;
}

bool StateVector::is_normalized(const Tolerances& tol) const {
  return std::abs(norm2(*this) - 1.0) <= tol.normalization;
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::domain_error("inner: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(const StateVector& v) {
  double s = 0.0;
  for (const Complex& a : v.amp) s += std::norm(a);
  return s;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  StateVector out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return out;
}

StateVector add(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::domain_error("add: dimension mismatch");
  StateVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

StateVector sub(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::domain_error("sub: dimension mismatch");
  StateVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
  return out;
}

StateVector scale(Complex c, const StateVector& v) {
  StateVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = c * v[i];
  return out;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::dagger() const {
  ComplexMatrix out(cols, rows);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double ComplexMatrix::trace_real() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i).real();
  return t;
}

bool ComplexMatrix::is_unitary(const Tolerances& tol) const {
  if (rows != cols) return false;
  return max_abs(dagger() * (*this) - identity(rows)) <= tol.unitarity;
}

bool ComplexMatrix::is_hermitian(const Tolerances& tol) const {
  if (rows != cols) return false;
  return max_abs(*this - dagger()) <= tol.hermiticity;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols != b.rows) throw std::domain_error("matmul: dimension mismatch");
  ComplexMatrix out(a.rows, b.cols);
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < b.cols; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::domain_error("matadd: dimension mismatch");
  ComplexMatrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] + b.data[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::domain_error("matsub: dimension mismatch");
  ComplexMatrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] - b.data[i];
  return out;
}

ComplexMatrix scale(Complex c, const ComplexMatrix& m) {
  ComplexMatrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = c * m.data[i];
  return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t ar = 0; ar < a.rows; ++ar)
    for (std::size_t ac = 0; ac < a.cols; ++ac) {
      const Complex v = a(ar, ac);
      if (v == Complex{}) continue;
      for (std::size_t br = 0; br < b.rows; ++br)
        for (std::size_t bc = 0; bc < b.cols; ++bc)
          out(ar * b.rows + br, ac * b.cols + bc) = v * b(br, bc);
    }
  return out;
}

ComplexMatrix outer(const StateVector& v) {
  ComplexMatrix out(v.dim(), v.dim());
  for (std::size_t r = 0; r < v.dim(); ++r)
    for (std::size_t c = 0; c < v.dim(); ++c) out(r, c) = v[r] * std::conj(v[c]);
  return out;
}

StateVector apply(const ComplexMatrix& m, const StateVector& v) {
  if (m.cols != v.dim()) throw std::domain_error("apply: dimension mismatch");
  StateVector out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    Complex s = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) s += m(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

double max_abs(const ComplexMatrix& m) {
  double mx = 0.0;
  for (const Complex& v : m.data) mx = std::max(mx, std::abs(v));
  return mx;
}

double shannon_entropy(std::span<const double> probs) {
  double s = 0.0;
  for (double p : probs) {
    if (p < 0.0)
      throw std::domain_error("shannon_entropy: negative entry " + std::to_string(p));
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

double shannon_entropy(std::initializer_list<double> probs) {
  return shannon_entropy(std::span<const double>(probs.begin(), probs.size()));
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("binary_entropy: p outside [0,1]: " + std::to_string(p));
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t c = 0; c < a.cols; ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// One two-sided rotation A <- J* A J on the (p,q) plane, where J is the
// product of a phase (making a_pq real) and a real Jacobi rotation chosen to
// zero the resulting symmetric off-diagonal element.
void jacobi_rotate(ComplexMatrix& a, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const Complex w = apq / g;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double tau = (aqq - app) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // J = P*G restricted to the (p,q) plane, with P = diag(1, conj(w))
  // absorbing the phase and G = [[c, s], [-s, c]] the real rotation.
  const Complex jpp = c;
  const Complex jpq = s;
  const Complex jqp = -s * std::conj(w);
  const Complex jqq = c * std::conj(w);

  const std::size_t n = a.rows;
  for (std::size_t k = 0; k < n; ++k) {  // A <- A J
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (std::size_t k = 0; k < n; ++k) {  // A <- J* A
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = Complex(a(p, p).real(), 0.0);
  a(q, q) = Complex(a(q, q).real(), 0.0);
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m,
                                          const Tolerances& tol) {
  if (m.rows != m.cols)
    throw std::domain_error("hermitian_eigenvalues: matrix not square");
  if (!m.is_hermitian(tol))
    throw std::domain_error("hermitian_eigenvalues: matrix not Hermitian within tolerance");

  // Work on the exactly-Hermitian part so roundoff in the input cannot leak
  // imaginary components into the diagonal.
  ComplexMatrix a = scale(0.5, m + m.dagger());
  const std::size_t n = a.rows;

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) < tol.jacobi_off_norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, p, q);
  }
  if (off_diagonal_norm(a) >= tol.jacobi_off_norm)
    throw std::runtime_error("hermitian_eigenvalues: Jacobi sweeps did not converge");

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

double von_neumann_entropy(const ComplexMatrix& rho, const Tolerances& tol) {
  std::vector<double> eig = hermitian_eigenvalues(rho, tol);
  for (double& lambda : eig) {
    if (lambda < -tol.psd_floor)
      throw std::domain_error("von_neumann_entropy: matrix not positive semidefinite");
    if (lambda < 0.0) lambda = 0.0;
  }
  return shannon_entropy(eig);
}

namespace {

std::size_t product(std::span<const std::size_t> v) {
  std::size_t p = 1;
  for (std::size_t d : v) p *= d;
  return p;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  const std::size_t total = product(dims);
  if (rho.rows != rho.cols || rho.rows != total)
    throw std::domain_error("partial_trace: dims do not match matrix dimension");
  for (std::size_t k : keep)
    if (k >= dims.size()) throw std::domain_error("partial_trace: keep index out of range");

  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) kept[k] = true;

  // Row-major strides: factor 0 is the most significant index.
  std::vector<std::size_t> stride(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];

  std::vector<std::size_t> keep_idx(keep.begin(), keep.end());
  std::vector<std::size_t> traced_idx;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!kept[i]) traced_idx.push_back(i);

  std::size_t dim_keep = 1, dim_traced = 1;
  for (std::size_t k : keep_idx) dim_keep *= dims[k];
  for (std::size_t t : traced_idx) dim_traced *= dims[t];

  // Offset of a flattened sub-index within the full composite index.
  auto expand = [&](std::size_t flat, const std::vector<std::size_t>& factors) {
    std::size_t offset = 0;
    for (std::size_t i = factors.size(); i-- > 0;) {
      const std::size_t f = factors[i];
      offset += (flat % dims[f]) * stride[f];
      flat /= dims[f];
    }
    return offset;
  };

  ComplexMatrix out(dim_keep, dim_keep);
  for (std::size_t rk = 0; rk < dim_keep; ++rk) {
    const std::size_t row_base = expand(rk, keep_idx);
    for (std::size_t ck = 0; ck < dim_keep; ++ck) {
      const std::size_t col_base = expand(ck, keep_idx);
      Complex s = 0.0;
      for (std::size_t t = 0; t < dim_traced; ++t) {
        const std::size_t off = expand(t, traced_idx);
        s += rho(row_base + off, col_base + off);
      }
      out(rk, ck) = s;
    }
  }
  return out;
}

double conditional_entropy(const ComplexMatrix& rho_ab,
                           std::span<const std::size_t> dims,
                           std::span<const std::size_t> subsystem_a,
                           const Tolerances& tol) {
  std::vector<bool> in_a(dims.size(), false);
  for (std::size_t i : subsystem_a) {
    if (i >= dims.size())
      throw std::domain_error("conditional_entropy: subsystem index out of range");
    in_a[i] = true;
  }
  std::vector<std::size_t> b_factors;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!in_a[i]) b_factors.push_back(i);

  const ComplexMatrix rho_b = partial_trace(rho_ab, dims, b_factors);
  return von_neumann_entropy(rho_ab, tol) - von_neumann_entropy(rho_b, tol);
}

}  // namespace sqkd
