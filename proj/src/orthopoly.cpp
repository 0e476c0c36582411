#include "bkm/orthopoly.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace bkm {

DiscreteMeasure disk_measure(double radius, int nr, int ntheta) {
  std::vector<double> gx, gw;
  gauss_legendre<double>(nr, gx, gw);
  DiscreteMeasure mu;
  mu.nodes.reserve(size_t(nr) * ntheta);
  mu.weights.reserve(size_t(nr) * ntheta);
  for (int i = 0; i < nr; ++i) {
    const double r = radius * 0.5 * (gx[i] + 1.0);
    const double wr = radius * 0.5 * gw[i] * r;  // area element r dr
    for (int j = 0; j < ntheta; ++j) {
      const double th = 2 * M_PI * (j + 0.5) / ntheta;
      mu.nodes.push_back(std::polar(r, th));
      mu.weights.push_back(wr * 2 * M_PI / ntheta);
    }
  }
  return mu;
}

DiscreteMeasure ellipse_measure(double a, double b, int nr, int ntheta) {
  DiscreteMeasure mu = disk_measure(1.0, nr, ntheta);
  for (auto& z : mu.nodes) z = Cd(a * z.real(), b * z.imag());
  for (auto& w : mu.weights) w *= a * b;
  return mu;
}

DiscreteMeasure lune_measure(int nr, int npsi) {
  std::vector<double> gx, gw, hx, hw;
  gauss_legendre<double>(npsi, gx, gw);
  gauss_legendre<double>(nr, hx, hw);
  DiscreteMeasure mu;
  mu.nodes.reserve(size_t(nr) * npsi);
  mu.weights.reserve(size_t(nr) * npsi);
  for (int i = 0; i < npsi; ++i) {
    const double psi = 0.5 * M_PI * gx[i];
    const double wpsi = 0.5 * M_PI * gw[i];
    const double r0 = std::cos(psi), r1 = 2 * std::cos(psi);
    for (int j = 0; j < nr; ++j) {
      const double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * hx[j];
      const double wr = 0.5 * (r1 - r0) * hw[j];
      mu.nodes.push_back(std::polar(r, psi));
      mu.weights.push_back(wpsi * wr * r);
    }
  }
  return mu;
}

OrthoBasis<double> orthonormalize_arnoldi(const DomainSpec& d, const DiscreteMeasure& mu,
                                          int N) {
  const size_t M = mu.nodes.size();
  if (static_cast<long long>(M) < static_cast<long long>(N + 1) * (N + 1))
    throw ValidationError("discrete measure needs at least (N+1)^2 nodes");
  for (double w : mu.weights)
    if (!(w > 0)) throw ValidationError("discrete measure weights must be positive");
  (void)d;

  auto dot = [&](const std::vector<Cd>& f, const std::vector<Cd>& g) {
    Cd s = 0;
    for (size_t i = 0; i < M; ++i) s += mu.weights[i] * f[i] * std::conj(g[i]);
    return s;
  };

  // Q: values of K_0..K_N at the nodes; C: their monomial coefficients,
  // carried through the same recurrence.
  std::vector<std::vector<Cd>> Q(N + 1, std::vector<Cd>(M));
  std::vector<std::vector<Cd>> C(N + 1);
  double mass = 0;
  for (double w : mu.weights) mass += w;
  const double q0 = 1.0 / std::sqrt(mass);
  for (size_t i = 0; i < M; ++i) Q[0][i] = q0;
  C[0] = {Cd(q0, 0)};

  std::vector<Cd> v(M);
  for (int k = 0; k < N; ++k) {
    for (size_t i = 0; i < M; ++i) v[i] = mu.nodes[i] * Q[k][i];
    std::vector<Cd> c(k + 2, Cd(0, 0));
    for (int j = 0; j <= k; ++j) c[j + 1] = C[k][j];
    // modified Gram-Schmidt, twice
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j <= k; ++j) {
        const Cd h = dot(v, Q[j]);
        for (size_t i = 0; i < M; ++i) v[i] -= h * Q[j][i];
        for (size_t l = 0; l < C[j].size(); ++l) c[l] -= h * C[j][l];
      }
    }
    const double nv = std::sqrt(std::abs(dot(v, v).real()));
    if (!(nv > 0))
      throw NumericalError("discrete measure is rank deficient at step " +
                           std::to_string(k + 1));
    Q[k + 1].resize(M);
    for (size_t i = 0; i < M; ++i) Q[k + 1][i] = v[i] / nv;
    for (auto& cc : c) cc /= nv;
    C[k + 1] = std::move(c);
  }

  OrthoBasis<double> basis;
  basis.degree = N;
  basis.method = "arnoldi";
  basis.coeffs.assign(size_t(N + 1) * (N + 1), Cplx<double>{});
  for (int n = 0; n <= N; ++n) {
    // rotate so the leading coefficient is real positive
    Cd lead = C[n][n];
    Cd rot = std::abs(lead) > 0 ? std::conj(lead) / std::abs(lead) : Cd(1, 0);
    for (int j = 0; j <= n; ++j) {
      const Cd cv = rot * C[n][j];
      basis.coeff(j, n) = Cplx<double>(cv.real(), cv.imag());
    }
  }

  // residual against the discrete inner product
  double worst = 0;
  for (int m = 0; m <= N; ++m)
    for (int n = m; n <= N; ++n) {
      Cd s = dot(Q[m], Q[n]);
      if (m == n) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  basis.residual = worst;
  basis.condition_estimate = 1.0;
  return basis;
}

std::vector<Cd> polynomial_roots(const std::vector<Cd>& coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) == 0) --deg;
  if (deg < 1) return {};

  // balance by rescaling the variable: z = s*u with s from the coefficient
  // magnitude spread, then companion-matrix eigenvalues
  double s = 1.0;
  const double c0 = std::abs(coeffs[0]), cd = std::abs(coeffs[deg]);
  if (c0 > 0 && cd > 0) s = std::pow(c0 / cd, 1.0 / deg);
  if (!(s > 1e-8 && s < 1e8)) s = 1.0;

  std::vector<Cd> b(deg + 1);
  double sp = 1.0;
  for (int j = 0; j <= deg; ++j) {
    b[j] = coeffs[j] * sp;
    sp *= s;
  }
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -b[i] / b[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success)
    throw NumericalError("companion-matrix eigensolver failed to converge");
  std::vector<Cd> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = s * es.eigenvalues()(i);
  return roots;
}

double hull_excess(const std::vector<Cd>& hull, Cd z) {
  // hull is counterclockwise; positive return means z is outside by that
  // distance
  const size_t n = hull.size();
  if (n < 3) return 1e300;
  double worst = -1e300;
  for (size_t i = 0; i < n; ++i) {
    const Cd a = hull[i], b = hull[(i + 1) % n];
    const Cd e = b - a;
    const double len = std::abs(e);
    if (len == 0) continue;
    const double cross = (e.real() * (z.imag() - a.imag()) - e.imag() * (z.real() - a.real()));
    worst = std::max(worst, -cross / len);
  }
  return worst;
}

}  // namespace bkm
