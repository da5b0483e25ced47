#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "ico/errors.hpp"

namespace ico {

using cplx = std::complex<double>;

// Dense complex square matrix of fixed compile-time size, row-major, value
// semantics. Only N = 2 (system/control states) and N = 4 (joint states and
// SWITCH operators) are used; the tensor factor order is fixed throughout as
// control (first factor) x system (second factor).
template <std::size_t N>
class Mat {
 public:
  static constexpr std::size_t dim = N;

  constexpr Mat() = default;

  static constexpr Mat zero() { return Mat{}; }

  static constexpr Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  constexpr cplx& operator()(std::size_t i, std::size_t j) { return e_[i * N + j]; }
  constexpr const cplx& operator()(std::size_t i, std::size_t j) const { return e_[i * N + j]; }

  constexpr Mat& operator+=(const Mat& o) {
    for (std::size_t k = 0; k < N * N; ++k) e_[k] += o.e_[k];
    return *this;
  }
  constexpr Mat& operator-=(const Mat& o) {
    for (std::size_t k = 0; k < N * N; ++k) e_[k] -= o.e_[k];
    return *this;
  }
  constexpr Mat& operator*=(const cplx& s) {
    for (std::size_t k = 0; k < N * N; ++k) e_[k] *= s;
    return *this;
  }

  friend constexpr Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend constexpr Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend constexpr Mat operator*(Mat a, const cplx& s) { return a *= s; }
  friend constexpr Mat operator*(const cplx& s, Mat a) { return a *= s; }

  friend constexpr Mat operator*(const Mat& a, const Mat& b) {
    Mat out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

 private:
  std::array<cplx, N * N> e_{};
};

using CMat2 = Mat<2>;
using CMat4 = Mat<4>;

template <std::size_t N>
constexpr Mat<N> adjoint(const Mat<N>& a) {
  Mat<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out(i, j) = std::conj(a(j, i));
  return out;
}

template <std::size_t N>
constexpr cplx trace(const Mat<N>& a) {
  cplx t{};
  for (std::size_t i = 0; i < N; ++i) t += a(i, i);
  return t;
}

// Tensor product; `a` is the first (control) factor.
template <std::size_t N, std::size_t M>
constexpr Mat<N * M> kron(const Mat<N>& a, const Mat<M>& b) {
  Mat<N * M> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < M; ++k)
        for (std::size_t l = 0; l < M; ++l) out(i * M + k, j * M + l) = a(i, j) * b(k, l);
  return out;
}

template <std::size_t N>
double max_abs(const Mat<N>& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

template <std::size_t N>
double max_offdiag(const Mat<N>& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

inline constexpr CMat2 diag2(const cplx& a, const cplx& b) {
  CMat2 m;
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

inline constexpr CMat2 pauli_x() {
  CMat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

inline constexpr CMat2 pauli_y() {
  CMat2 m;
  m(0, 1) = cplx{0.0, -1.0};
  m(1, 0) = cplx{0.0, 1.0};
  return m;
}

inline constexpr CMat2 pauli_z() { return diag2(1.0, -1.0); }

// Eigenvalues of a 2x2 Hermitian matrix in ascending order (closed form).
inline std::array<double, 2> hermitian_eigenvalues(const CMat2& a) {
  const double mean = 0.5 * (a(0, 0).real() + a(1, 1).real());
  const double half_gap = 0.5 * (a(0, 0).real() - a(1, 1).real());
  const double radius = std::hypot(half_gap, std::abs(a(0, 1)));
  return {mean - radius, mean + radius};
}

namespace detail {

// Cyclic complex Jacobi iteration. Internal helper used solely to bound the
// spectrum of small Hermitian matrices during validation; not a general
// eigensolver facility.
template <std::size_t N>
std::array<double, N> jacobi_eigenvalues(Mat<N> a) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    if (max_offdiag(a) < 1e-15 * std::max(1.0, max_abs(a))) break;
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const cplx z = a(p, q);
        if (std::abs(z) < 1e-306) continue;
        const double phase = std::arg(z);
        const double rot = 0.5 * std::atan2(2.0 * std::abs(z), a(q, q).real() - a(p, p).real());
        const double c = std::cos(rot), s = std::sin(rot);
        Mat<N> j = Mat<N>::identity();
        j(p, p) = c;
        j(p, q) = s * std::polar(1.0, phase);
        j(q, p) = -s * std::polar(1.0, -phase);
        j(q, q) = c;
        a = adjoint(j) * a * j;
      }
    }
  }
  std::array<double, N> ev;
  for (std::size_t i = 0; i < N; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace detail

// Default validation tolerances. Every validation entry point takes them as an
// optional argument so callers can tighten or relax per call.
struct DensityTolerances {
  double hermitian = 1e-12;
  double trace = 1e-12;
  double psd = 1e-12;  // eigenvalue floor is -psd
};

// A 2x2 matrix verified to be Hermitian, unit-trace and positive semidefinite.
class DensityMatrix2 {
 public:
  explicit DensityMatrix2(const CMat2& m, const DensityTolerances& tol = {}) : m_(m) {
    double herm = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        herm = std::max(herm, std::abs(m(i, j) - std::conj(m(j, i))));
    if (herm > tol.hermitian) throw NotHermitian(herm);
    const double tr_dev = std::abs(trace(m) - cplx{1.0});
    if (tr_dev > tol.trace) throw TraceNotOne(tr_dev);
    const double lo = hermitian_eigenvalues(m)[0];
    if (lo < -tol.psd) throw NotPSD(-lo);
  }

  const CMat2& matrix() const { return m_; }
  cplx operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  CMat2 m_;
};

inline DensityMatrix2 validate_density(const CMat2& a, const DensityTolerances& tol = {}) {
  return DensityMatrix2(a, tol);
}

// Elementwise square root of a diagonal matrix with nonnegative real entries.
inline CMat2 diag_sqrt(const CMat2& a, double offdiag_tol = 1e-14, double negative_tol = 1e-14) {
  const double off = max_offdiag(a);
  if (off > offdiag_tol) throw NonDiagonalInput(off);
  const double imag = std::max(std::abs(a(0, 0).imag()), std::abs(a(1, 1).imag()));
  if (imag > offdiag_tol) throw NonDiagonalInput(imag);
  CMat2 out;
  for (std::size_t i = 0; i < 2; ++i) {
    const double d = a(i, i).real();
    if (d < -negative_tol) throw NegativeDiagonal(-d);
    out(i, i) = std::sqrt(std::max(d, 0.0));
  }
  return out;
}

}  // namespace ico
