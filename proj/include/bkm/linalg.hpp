#pragma once

#include <optional>
#include <vector>

#include "bkm/complex.hpp"

namespace bkm {

// Small dense complex matrix, row-major. The sizes here are a few hundred at
// most; plain loops at the working precision beat anything fancier.
template <class R>
struct CMat {
  int rows = 0, cols = 0;
  std::vector<Cplx<R>> a;

  CMat() = default;
  CMat(int r, int c) : rows(r), cols(c), a(size_t(r) * c) {}
  Cplx<R>& operator()(int i, int j) { return a[size_t(i) * cols + j]; }
  const Cplx<R>& operator()(int i, int j) const { return a[size_t(i) * cols + j]; }
};

// Cholesky factorization A = L L^H of a Hermitian positive definite matrix.
// Returns the failing pivot index instead of a factor when A is not PD at
// this precision.
template <class R>
std::optional<int> cholesky(const CMat<R>& A, CMat<R>& L) {
  using std::sqrt;
  using boost::multiprecision::sqrt;
  const int n = A.rows;
  L = CMat<R>(n, n);
  for (int j = 0; j < n; ++j) {
    R d = A(j, j).re;
    for (int k = 0; k < j; ++k) d -= norm(L(j, k));
    if (!(d > 0)) return j;
    const R ljj = sqrt(d);
    L(j, j) = Cplx<R>(ljj);
    for (int i = j + 1; i < n; ++i) {
      Cplx<R> s = A(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * conj(L(j, k));
      L(i, j) = s / ljj;
    }
  }
  return std::nullopt;
}

// Inverse of L^H (upper triangular) by back substitution: returns C with
// L^H C = I. Columns of C are the orthonormalization coefficients.
template <class R>
CMat<R> invert_upper_from_cholesky(const CMat<R>& L) {
  const int n = L.rows;
  CMat<R> C(n, n);
  for (int col = 0; col < n; ++col) {
    C(col, col) = Cplx<R>(R(1)) / conj(L(col, col));
    for (int i = col - 1; i >= 0; --i) {
      Cplx<R> s;
      for (int k = i + 1; k <= col; ++k) s += conj(L(k, i)) * C(k, col);
      C(i, col) = -s / conj(L(i, i));
    }
  }
  return C;
}

// Solve A x = b given the Cholesky factor L of A.
template <class R>
std::vector<Cplx<R>> cholesky_solve(const CMat<R>& L, std::vector<Cplx<R>> b) {
  const int n = L.rows;
  for (int i = 0; i < n; ++i) {
    Cplx<R> s = b[i];
    for (int k = 0; k < i; ++k) s -= L(i, k) * b[k];
    b[i] = s / L(i, i).re;
  }
  for (int i = n - 1; i >= 0; --i) {
    Cplx<R> s = b[i];
    for (int k = i + 1; k < n; ++k) s -= conj(L(k, i)) * b[k];
    b[i] = s / L(i, i).re;
  }
  return b;
}

}  // namespace bkm
