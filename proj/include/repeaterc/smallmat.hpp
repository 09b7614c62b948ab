// smallmat.hpp
// Dense complex matrices for one- and two-qubit work: products, Kronecker
// products, partial traces, and a Jacobi eigensolver for Hermitian input.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "repeaterc/errors.hpp"

namespace repeaterc {

using cplx = std::complex<double>;

// Tolerances shared by every module.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdClampTol = 1e-10;
inline constexpr double kJacobiOffDiagTol = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("ComplexMatrix: entry count " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(rows_) + "x" +
                                  std::to_string(cols_));
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::invalid_argument("ComplexMatrix: non-finite entry");
      }
    }
  }

  // Row-major nested initializer: ComplexMatrix{{1, 0}, {0, 1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ComplexMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  // |v><v|
  static ComplexMatrix outer(std::span<const cplx> v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  // Entrywise complex conjugate in the computational basis.
  ComplexMatrix conjugate() const {
    ComplexMatrix out = *this;
    for (auto& z : out.data_) z = std::conj(z);
    return out;
  }

  cplx trace() const {
    require_square("trace");
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  // max |A - A^dagger| over all entries.
  double hermitian_deviation() const {
    require_square("hermitian_deviation");
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r; c < cols_; ++c)
        worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return worst;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw std::invalid_argument("ComplexMatrix: product of " + a.shape() + " and " + b.shape());
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  // Matrix-vector product.
  std::vector<cplx> apply(std::span<const cplx> v) const {
    if (v.size() != cols_) throw std::invalid_argument("ComplexMatrix: apply dimension mismatch");
    std::vector<cplx> out(rows_, cplx{});
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_square(const char* what) const {
    if (!is_square()) throw std::invalid_argument(std::string(what) + ": matrix is " + shape());
  }
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw std::invalid_argument(std::string("ComplexMatrix: ") + op + " of " + shape() +
                                  " and " + o.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix d = a - b;
  double worst = 0.0;
  for (const auto& z : d.entries()) worst = std::max(worst, std::abs(z));
  return worst;
}

// Kronecker product a (x) b.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

enum class Subsystem { First = 1, Second = 2 };

// Reduces a two-qubit operator to the qubit named by `keep`.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("partial_trace: expected 4x4, got " + rho.shape());
  }
  ComplexMatrix out(2, 2);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t t = 0; t < 2; ++t) {
        if (keep == Subsystem::First) {
          out(a, b) += rho(2 * a + t, 2 * b + t);
        } else {
          out(a, b) += rho(2 * t + a, 2 * t + b);
        }
      }
  return out;
}

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

namespace detail {

inline double off_diagonal_mass(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p, q). Updates a <- G^dagger a G and
// v <- v G, touching only rows/columns p and q.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const cplx apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const cplx phase = apq / r;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // G restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
  const cplx gpp = c;
  const cplx gpq = s;
  const cplx gqp = -s * std::conj(phase);
  const cplx gqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  // a <- a G (columns p, q)
  for (std::size_t k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  // a <- G^dagger a (rows p, q)
  for (std::size_t k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx vkp = v(k, p);
    const cplx vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

}  // namespace detail

// Cyclic complex Jacobi. Eigenvalues are returned ascending.
inline EigenDecomposition hermitian_eigen(const ComplexMatrix& h) {
  if (!h.is_square()) throw std::invalid_argument("hermitian_eigen: matrix is " + h.shape());
  if (h.hermitian_deviation() > kHermitianTol) {
    throw std::invalid_argument("hermitian_eigen: input is not Hermitian (deviation " +
                                std::to_string(h.hermitian_deviation()) + ")");
  }
  const std::size_t n = h.rows();
  ComplexMatrix a = h;
  // Symmetrize so the rotations act on an exactly Hermitian matrix.
  for (std::size_t r = 0; r < n; ++r) {
    a(r, r) = a(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const cplx avg = 0.5 * (a(r, c) + std::conj(a(c, r)));
      a(r, c) = avg;
      a(c, r) = std::conj(avg);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double threshold = kJacobiOffDiagTol * std::max(1.0, h.frobenius_norm());

  bool converged = detail::off_diagonal_mass(a) < threshold;
  for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
    converged = detail::off_diagonal_mass(a) < threshold;
  }
  if (!converged) {
    throw NumericalError("hermitian_eigen: no convergence after " +
                         std::to_string(kJacobiMaxSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  return hermitian_eigen(h).eigenvalues;
}

// V f(diag) V^dagger
template <typename F>
ComplexMatrix apply_spectral(const EigenDecomposition& eig, F&& f) {
  const auto& v = eig.eigenvectors;
  const std::size_t n = v.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.eigenvalues[k]);
    if (fk == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) out(r, c) += fk * v(r, k) * std::conj(v(c, k));
  }
  return out;
}

// Square root of a positive semidefinite Hermitian matrix. Eigenvalues in
// [-kPsdClampTol, 0) are treated as zero.
inline ComplexMatrix mat_sqrt_psd(const ComplexMatrix& h) {
  const auto eig = hermitian_eigen(h);
  if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < -kPsdClampTol) {
    throw std::domain_error("mat_sqrt_psd: negative eigenvalue " +
                            std::to_string(eig.eigenvalues.front()));
  }
  return apply_spectral(eig, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

}  // namespace repeaterc
