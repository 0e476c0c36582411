#pragma once

#include <utility>
#include <vector>

#include "bkm/orthopoly.hpp"

namespace bkm {

// Bieberbach polynomial B_n: the degree-<=n minimizer of ||P'||_{L2(G)} under
// P(z0) = 0, P'(z0) = 1. Built either from the orthonormal basis via
//   B_n(z) = sum_{k<n} conj(K_k(z0)) int_{z0}^{z} K_k(t) dt / S_n,
//   S_n = sum_{k<n} |K_k(z0)|^2,
// or by solving the constrained quadratic problem directly.
template <class R>
struct BieberbachPoly {
  std::vector<Cplx<R>> coeffs;  // degree <= n
  int n = 0;
  Cplx<R> z0;
  R s_n{};
  std::string method;

  Cplx<R> eval(const Cplx<R>& z) const {
    Cplx<R> acc;
    for (size_t j = coeffs.size(); j-- > 0;) acc = acc * z + coeffs[j];
    return acc;
  }
  Cplx<R> eval_deriv(const Cplx<R>& z) const {
    Cplx<R> acc;
    for (size_t j = coeffs.size(); j-- > 1;) acc = acc * z + R(double(j)) * coeffs[j];
    return acc;
  }
};

template <class R>
struct KernelPartialSum {
  std::vector<Cplx<R>> coeffs;  // polynomial sum_{k<n} conj(K_k(z0)) K_k(z)
  int n = 0;
  Cplx<R> z0;

  Cplx<R> eval(const Cplx<R>& z) const {
    Cplx<R> acc;
    for (size_t j = coeffs.size(); j-- > 0;) acc = acc * z + coeffs[j];
    return acc;
  }
};

namespace detail {

template <class R>
std::vector<Cplx<R>> basis_values_at(const OrthoBasis<R>& basis, const Cplx<R>& z0, int n) {
  std::vector<Cplx<R>> v(n);
  for (int k = 0; k < n; ++k) v[k] = basis.eval(k, z0);
  return v;
}

}  // namespace detail

template <class R>
BieberbachPoly<R> bieberbach_from_basis(const OrthoBasis<R>& basis, int n,
                                        const Cplx<R>& z0) {
  if (n < 1 || n > basis.degree + 1)
    throw ValidationError("bieberbach index must satisfy 1 <= n <= N+1");
  const auto kz0 = detail::basis_values_at(basis, z0, n);
  R s{};
  for (const auto& v : kz0) s += norm(v);
  if (!(s > R(1e-300)))
    throw NumericalError("S_n underflow: the basis is degenerate at z0");

  BieberbachPoly<R> b;
  b.n = n;
  b.z0 = z0;
  b.s_n = s;
  b.method = "formula";
  b.coeffs.assign(size_t(n) + 1, Cplx<R>{});
  for (int k = 0; k < n; ++k) {
    const Cplx<R> w = conj(kz0[k]);
    // term-by-term antiderivative of K_k from z0 (exact)
    Cplx<R> a_at_z0;
    for (int j = k; j >= 0; --j) {
      const Cplx<R> aj = basis.coeff(j, k) / R(double(j + 1));
      a_at_z0 = (a_at_z0 + aj) * z0;
      b.coeffs[j + 1] += w * aj;
    }
    b.coeffs[0] -= w * a_at_z0;
  }
  for (auto& c : b.coeffs) c = c / s;
  return b;
}

// Direct solution of the extremal problem: minimize the derivative quadratic
// form over Q = P' of degree < n with Q(z0) = 1, then integrate.
template <class R>
BieberbachPoly<R> solve_extremal(const GramMatrix<R>& g, int n, const Cplx<R>& z0) {
  if (n < 1 || n > g.degree + 1)
    throw ValidationError("bieberbach index must satisfy 1 <= n <= N+1");
  CMat<R> W(n, n), L;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) W(i, j) = conj(g.at(i, j));
  if (auto bad = cholesky(W, L))
    throw NumericalError("singular KKT system (gram defect at pivot " +
                         std::to_string(*bad) + ")");
  std::vector<Cplx<R>> u(n);
  Cplx<R> zp(R(1));
  for (int j = 0; j < n; ++j) {
    u[j] = conj(zp);
    zp *= z0;
  }
  const auto x = cholesky_solve(L, u);  // x = W^{-1} u
  Cplx<R> uhx;
  for (int j = 0; j < n; ++j) uhx += conj(u[j]) * x[j];
  // u^H W^{-1} u is real positive
  const R s = uhx.re;
  if (!(s > R(1e-300))) throw NumericalError("degenerate extremal system");

  BieberbachPoly<R> b;
  b.n = n;
  b.z0 = z0;
  b.s_n = s;
  b.method = "extremal";
  b.coeffs.assign(size_t(n) + 1, Cplx<R>{});
  Cplx<R> c0;
  Cplx<R> zpow(R(1));  // z0^{j+1} accumulator
  for (int j = 0; j < n; ++j) {
    const Cplx<R> cj = x[j] / (s * R(double(j + 1)));
    b.coeffs[j + 1] = cj;
    zpow *= z0;
    c0 += cj * zpow;
  }
  b.coeffs[0] = -c0;
  return b;
}

template <class R>
KernelPartialSum<R> kernel_partial_sum(const OrthoBasis<R>& basis, int n,
                                       const Cplx<R>& z0) {
  if (n < 1 || n > basis.degree + 1)
    throw ValidationError("kernel partial sum index must satisfy 1 <= n <= N+1");
  KernelPartialSum<R> ks;
  ks.n = n;
  ks.z0 = z0;
  ks.coeffs.assign(size_t(n), Cplx<R>{});
  for (int k = 0; k < n; ++k) {
    const Cplx<R> w = conj(basis.eval(k, z0));
    for (int j = 0; j <= k; ++j) ks.coeffs[j] += w * basis.coeff(j, k);
  }
  return ks;
}

// R0 estimate (pi * S_n)^{-1/2}; nonincreasing in n, >= true R0 for an exact
// basis.
template <class R>
R inner_radius_estimate(const OrthoBasis<R>& basis, int n, const Cplx<R>& z0) {
  if (n < 1) throw ValidationError("inner radius estimate needs n >= 1");
  const auto kz0 = detail::basis_values_at(basis, z0, n);
  R s{};
  for (const auto& v : kz0) s += norm(v);
  using std::sqrt;
  using boost::multiprecision::sqrt;
  return R(1) / sqrt(boost::math::constants::pi<R>() * s);
}

// Shared evaluator for the whole family B_1..B_{N+1} at a point: one pass
// over the basis triangle instead of one Horner per n.
template <class R>
struct BieberbachFamily {
  int max_n = 0;  // B_n available for 1 <= n <= max_n
  Cplx<R> z0;
  std::vector<R> s;                          // s[k] = S_{k+1} partial sums
  std::vector<Cplx<R>> weights;              // conj(K_k(z0))
  std::vector<std::vector<Cplx<R>>> integ;   // integ[k] = coeffs of int_{z0}^z K_k

  BieberbachFamily(const OrthoBasis<R>& basis, const Cplx<R>& z0_in) {
    max_n = basis.degree + 1;
    z0 = z0_in;
    weights.resize(max_n);
    s.resize(max_n);
    integ.resize(max_n);
    R acc{};
    for (int k = 0; k < max_n; ++k) {
      weights[k] = conj(basis.eval(k, z0));
      acc += norm(weights[k]);
      s[k] = acc;
      auto& J = integ[k];
      J.assign(size_t(k) + 2, Cplx<R>{});
      Cplx<R> a_at_z0;
      for (int j = k; j >= 0; --j) {
        const Cplx<R> aj = basis.coeff(j, k) / R(double(j + 1));
        a_at_z0 = (a_at_z0 + aj) * z0;
        J[j + 1] = aj;
      }
      J[0] = -a_at_z0;
    }
  }

  R s_n(int n) const { return s[n - 1]; }

  // values of B_n(z) for all n = 1..max_n
  std::vector<Cplx<R>> eval_all(const Cplx<R>& z) const {
    std::vector<Cplx<R>> zp(max_n + 1);
    zp[0] = Cplx<R>(R(1));
    for (int j = 1; j <= max_n; ++j) zp[j] = zp[j - 1] * z;
    std::vector<Cplx<R>> out(max_n);
    Cplx<R> partial;
    for (int k = 0; k < max_n; ++k) {
      Cplx<R> ik;
      for (size_t j = 0; j < integ[k].size(); ++j) ik += integ[k][j] * zp[j];
      partial += weights[k] * ik;
      out[k] = partial / s[k];
    }
    return out;
  }
};

template <class R>
std::string poly_to_csv(const BieberbachPoly<R>& b) {
  std::string out = "# n=" + std::to_string(b.n) + " z0=" + real_to_string(b.z0.re) + "," +
                    real_to_string(b.z0.im) + " s_n=" + real_to_string(b.s_n) +
                    " method=" + b.method + "\n";
  out += "j,re,im\n";
  for (size_t j = 0; j < b.coeffs.size(); ++j)
    out += std::to_string(j) + "," + real_to_string(b.coeffs[j].re) + "," +
           real_to_string(b.coeffs[j].im) + "\n";
  return out;
}

}  // namespace bkm
