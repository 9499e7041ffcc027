// Small Hermitian matrices: eigenvalues and relative bounds.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "kahler/core.hpp"

namespace kahler {

/// n x n complex matrix, n <= kMaxDim, row-major inline storage.
struct HermitianMatrix {
  std::size_t n = 1;
  std::array<Complex, kMaxDim * kMaxDim> a{};

  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t dim) : n(dim) {
    if (dim == 0 || dim > kMaxDim) throw Error(ErrorKind::UnsupportedDimension, "matrix size out of range");
  }

  Complex& operator()(std::size_t i, std::size_t j) noexcept { return a[i * kMaxDim + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const noexcept { return a[i * kMaxDim + j]; }

  /// max |A - A^H| entry.
  double asymmetry() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
  }
};

namespace detail {

// Cyclic Jacobi on a real symmetric matrix of size m (row-major, stride m).
inline std::vector<double> jacobi_eigenvalues(std::vector<double> s, std::size_t m) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return s[i * m + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) off += at(i, j) * at(i, j);
    if (std::sqrt(off) < 1e-12) break;
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        if (at(p, q) == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
        for (std::size_t k = 0; k < m; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - sn * akq;
          at(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - sn * aqk;
          at(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(m);
  for (std::size_t i = 0; i < m; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace detail

/// Ascending eigenvalues of the Hermitian part of A. Closed form for n <= 2;
/// otherwise cyclic Jacobi on the real 2n x 2n embedding [[Re,-Im],[Im,Re]],
/// whose spectrum is that of A with every eigenvalue doubled.
inline std::vector<double> hermitian_eigenvalues(const HermitianMatrix& A) {
  const std::size_t n = A.n;
  if (n == 1) return {A(0, 0).real()};
  if (n == 2) {
    const double a = A(0, 0).real(), d = A(1, 1).real();
    const Complex b = 0.5 * (A(0, 1) + std::conj(A(1, 0)));
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), std::abs(b));
    return {mean - rad, mean + rad};
  }
  const std::size_t m = 2 * n;
  std::vector<double> s(m * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex h = 0.5 * (A(i, j) + std::conj(A(j, i)));
      s[i * m + j] = h.real();
      s[(i + n) * m + (j + n)] = h.real();
      s[i * m + (j + n)] = -h.imag();
      s[(i + n) * m + j] = h.imag();
    }
  }
  auto ev2 = detail::jacobi_eigenvalues(std::move(s), m);
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = 0.5 * (ev2[2 * i] + ev2[2 * i + 1]);
  return ev;
}

inline double min_eigenvalue(const HermitianMatrix& A) { return hermitian_eigenvalues(A).front(); }

/// sup |v^H P v| / (v^H B v) over v != 0, i.e. the spectral radius of
/// B^{-1/2} P B^{-1/2}. Infinite when B is not positive definite.
inline double relative_bound(const HermitianMatrix& B, const HermitianMatrix& P) {
  const std::size_t n = B.n;
  if (P.n != n) throw Error(ErrorKind::InvalidArgument, "relative_bound: size mismatch");
  // Cholesky B = L L^H.
  HermitianMatrix L(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = B(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(L(j, k));
    if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
    L(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = 0.5 * (B(i, j) + std::conj(B(j, i)));
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
      L(i, j) = s / L(j, j).real();
    }
  }
  // X = L^{-1} P, then M = X L^{-H} computed as (L^{-1} X^H)^H.
  auto forward = [&](const HermitianMatrix& R) {
    HermitianMatrix X(n);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        Complex s = R(i, c);
        for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * X(k, c);
        X(i, c) = s / L(i, i).real();
      }
    }
    return X;
  };
  HermitianMatrix X = forward(P);
  HermitianMatrix XH(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) XH(i, j) = std::conj(X(j, i));
  HermitianMatrix Y = forward(XH);
  HermitianMatrix M(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) = std::conj(Y(j, i));
  auto ev = hermitian_eigenvalues(M);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

}  // namespace kahler
