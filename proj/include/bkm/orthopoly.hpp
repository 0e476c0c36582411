#pragma once

#include <string>
#include <vector>

#include "bkm/gram.hpp"

namespace bkm {

// Area-orthonormal polynomials K_0..K_N with positive real leading
// coefficients; column n of `coeffs` holds the monomial coefficients of K_n.
template <class R>
struct OrthoBasis {
  int degree = 0;
  std::string method;  // "cholesky" or "arnoldi"
  double condition_estimate = 0;
  double residual = 0;  // max |<K_m, K_n> - delta| in the source inner product
  std::vector<Cplx<R>> coeffs;  // (N+1)x(N+1) row-major, upper triangular

  static constexpr int precision_bits = PrecisionTraits<R>::bits;

  const Cplx<R>& coeff(int j, int n) const { return coeffs[size_t(j) * (degree + 1) + n]; }
  Cplx<R>& coeff(int j, int n) { return coeffs[size_t(j) * (degree + 1) + n]; }

  Cplx<R> eval(int n, const Cplx<R>& z) const {
    if (n < 0 || n > degree) throw ValidationError("basis index out of range");
    Cplx<R> acc = coeff(n, n);
    for (int j = n - 1; j >= 0; --j) acc = acc * z + coeff(j, n);
    return acc;
  }

  std::vector<Cplx<R>> column(int n) const {
    std::vector<Cplx<R>> c(n + 1);
    for (int j = 0; j <= n; ++j) c[j] = coeff(j, n);
    return c;
  }
};

// Discrete interior area measure (nodes + positive weights) for the Arnoldi
// path and its cross-checks.
struct DiscreteMeasure {
  std::vector<Cd> nodes;
  std::vector<double> weights;
};

DiscreteMeasure disk_measure(double radius, int nr, int ntheta);
DiscreteMeasure ellipse_measure(double a, double b, int nr, int ntheta);
// Polar-from-the-cusp cells for the lune: the domain is exactly
// { r e^{i psi} : |psi| < pi/2, cos(psi) < r < 2 cos(psi) }.
DiscreteMeasure lune_measure(int nr, int npsi);

// Precision Cholesky of the Gram matrix; the positive Cholesky diagonal
// forces the leading-coefficient convention.
template <class R>
OrthoBasis<R> orthonormalize_cholesky(const GramMatrix<R>& g) {
  const int N = g.degree;
  CMat<R> W(N + 1, N + 1), L;
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) W(i, j) = conj(g.at(i, j));
  if (auto bad = cholesky(W, L))
    throw NumericalError("cholesky pivot breakdown at index " + std::to_string(*bad) +
                         "; rerun with higher precision-bits");
  CMat<R> C = invert_upper_from_cholesky(L);

  OrthoBasis<R> basis;
  basis.degree = N;
  basis.method = "cholesky";
  basis.coeffs = std::move(C.a);
  double dmax = 0, dmin = 1e308;
  for (int i = 0; i <= N; ++i) {
    const double d = static_cast<double>(L(i, i).re);
    dmax = std::max(dmax, d);
    dmin = std::min(dmin, d);
  }
  basis.condition_estimate = (dmax / dmin) * (dmax / dmin);

  // orthonormality residual in the gram inner product: C^H W C - I
  R worst = 0;
  CMat<R> WC(N + 1, N + 1);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) {
      Cplx<R> s;
      for (int k = 0; k <= j; ++k) s += W(i, k) * basis.coeff(k, j);
      WC(i, j) = s;
    }
  for (int i = 0; i <= N; ++i)
    for (int j = i; j <= N; ++j) {
      Cplx<R> s;
      for (int k = 0; k <= N; ++k) s += conj(basis.coeff(k, i)) * WC(k, j);
      if (i == j) s -= Cplx<R>(R(1));
      using std::max;
      using boost::multiprecision::max;
      worst = max(worst, bkm::abs(s));
    }
  basis.residual = static_cast<double>(worst);
  return basis;
}

// Multiplication-by-z Arnoldi orthogonalization against a discrete area
// measure; numerically stable in plain double where the Gram route needs
// extended precision. Coefficients are reconstructed from the recurrence.
OrthoBasis<double> orthonormalize_arnoldi(const DomainSpec& d, const DiscreteMeasure& mu,
                                          int N);

struct HullCheckResult {
  bool all_inside = false;
  Cd worst_root;
  double worst_margin = 0;  // signed distance outside the hull (<= 0 inside)
  std::vector<Cd> roots;
};

// Roots of a polynomial via the balanced companion matrix (Eigen eigensolver).
std::vector<Cd> polynomial_roots(const std::vector<Cd>& coeffs);

// Tests whether all roots of K_n lie in the convex hull of the boundary
// sample, with tolerance 1e-6 * diam(G).
template <class R>
HullCheckResult zeros_in_hull_check(const OrthoBasis<R>& basis, const DomainSpec& d, int n);

// Membership helper shared with tests: signed distance of z outside hull.
double hull_excess(const std::vector<Cd>& hull, Cd z);

template <class R>
std::string basis_to_csv(const OrthoBasis<R>& basis) {
  std::string out = "# degree=" + std::to_string(basis.degree) + " method=" + basis.method +
                    " residual=" + real_to_string(basis.residual) + "\n";
  out += "j,n,re,im\n";
  for (int j = 0; j <= basis.degree; ++j)
    for (int n = j; n <= basis.degree; ++n)
      out += std::to_string(j) + "," + std::to_string(n) + "," +
             real_to_string(basis.coeff(j, n).re) + "," +
             real_to_string(basis.coeff(j, n).im) + "\n";
  return out;
}

template <class R>
HullCheckResult zeros_in_hull_check(const OrthoBasis<R>& basis, const DomainSpec& d, int n) {
  if (n < 1) throw ValidationError("hull check needs n >= 1");
  std::vector<Cd> coeffs(n + 1);
  for (int j = 0; j <= n; ++j) coeffs[j] = basis.coeff(j, n).to_std();
  HullCheckResult res;
  res.roots = polynomial_roots(coeffs);
  const auto hull = d.convex_hull();
  const double tol = 1e-6 * d.diameter;
  res.all_inside = true;
  res.worst_margin = -1e300;
  for (Cd r : res.roots) {
    const double excess = hull_excess(hull, r);
    if (excess > res.worst_margin) {
      res.worst_margin = excess;
      res.worst_root = r;
    }
    if (excess > tol) res.all_inside = false;
  }
  return res;
}

}  // namespace bkm
