#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace vvc {

// Small dense symmetric matrices, row-major.
using Matrix = std::vector<double>;

// Cyclic Jacobi eigensolver; returns eigenvalues ascending, optional vectors
// (columns of V).  Intended for the desk-scale Gram/pencil matrices here.
inline std::vector<double> jacobi_eigenvalues(Matrix A, std::size_t n, Matrix* V = nullptr) {
  if (V) {
    V->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*V)[i * n + i] = 1.0;
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += A[p * n + q] * A[p * n + q];
    if (off < 1e-300) break;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(A[i * n + i]));
    if (std::sqrt(off) < 1e-15 * std::max(scale, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A[p * n + q];
        if (apq == 0.0) continue;
        const double theta = 0.5 * (A[q * n + q] - A[p * n + p]) / apq;
        const double t = ((theta >= 0.0) ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = A[i * n + p], aiq = A[i * n + q];
          A[i * n + p] = c * aip - s * aiq;
          A[i * n + q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = A[p * n + i], aqi = A[q * n + i];
          A[p * n + i] = c * api - s * aqi;
          A[q * n + i] = s * api + c * aqi;
        }
        if (V) {
          for (std::size_t i = 0; i < n; ++i) {
            const double vip = (*V)[i * n + p], viq = (*V)[i * n + q];
            (*V)[i * n + p] = c * vip - s * viq;
            (*V)[i * n + q] = s * vip + c * viq;
          }
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = A[i * n + i];
  // ascending order (vectors permuted alongside when requested)
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (ev[idx[j]] < ev[idx[i]]) std::swap(idx[i], idx[j]);
  std::vector<double> sorted(n);
  Matrix Vs;
  if (V) Vs.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sorted[i] = ev[idx[i]];
    if (V)
      for (std::size_t r = 0; r < n; ++r) Vs[r * n + i] = (*V)[r * n + idx[i]];
  }
  if (V) *V = std::move(Vs);
  return sorted;
}

// Cholesky factorization A = L L^T in place (lower triangle); throws if not SPD.
inline Matrix cholesky(const Matrix& A, std::size_t n) {
  Matrix L(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = A[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        L[i * n + i] = std::sqrt(s);
      } else {
        L[i * n + j] = s / L[j * n + j];
      }
    }
  }
  return L;
}

inline void cholesky_solve_inplace(const Matrix& L, std::size_t n, std::vector<double>& b) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= L[i * n + k] * b[k];
    b[i] = s / L[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= L[k * n + i] * b[k];
    b[i] = s / L[i * n + i];
  }
}

}  // namespace vvc
