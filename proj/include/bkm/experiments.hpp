#pragma once

#include <string>
#include <vector>

#include "bkm/bieberbach.hpp"
#include "bkm/refmaps.hpp"

namespace bkm {

struct ErrorCurve {
  std::vector<std::pair<int, double>> points;  // (n, sampled sup error)
  int boundary_samples = 0;
  int interior_samples = 0;
};

// Fit of e_n ~ C * q^(n^r) over a grid of r values.
struct RateFit {
  double C = 0, q = 0, r = 0;
  double r2 = 0;
  int n_min = 0, n_max = 0;

  double predict(int n) const { return C * std::pow(q, std::pow(double(n), r)); }
};

// Fit of |phi(t) - phi(cusp)| ~ C * exp(-c / |t|^(p-1)).
struct CuspFit {
  double C = 0, c = 0;
  double p_used = 2;
  double r2 = 0;
  int points_used = 0;
};

struct DivergenceReport {
  double x0 = 0;
  std::vector<std::pair<int, double>> values;     // (n, |B_n(x0)|)
  std::vector<std::pair<int, double>> sup_by_n;   // (N, sup_{n<=N} |B_n(x0)|)
  double growth_factor = 0;                       // last sup / first sup
  std::string verdict;                            // "growing" or "bounded"
};

struct KeldyshStage {
  std::string domain_hash;
  double xi_next = 0;
  int n_m = 0;
  double certificate_value = 0;       // |B_{n_m}(xi_next)|
  double target = 0;
  double delta = 0;                   // spike half-width of the next domain
  double stability_max = 0;           // max |B_{n,m} - B_{n,m+1}| over samples
  double stability_bound = 0;         // 2^{-(m+1)}
  std::vector<std::string> certificate_coeffs;  // full-precision B_{n_m} coefficients
};

struct KeldyshResult {
  std::vector<KeldyshStage> stages;
  bool completed = false;
  std::string note;
  int degree_budget = 0;
};

// Sample set for sup-norm estimates: boundary-adjacent points (inward offset
// with cusp/corner-aware clearance) plus interior points, filtered through
// the reference map (|phi| < R0).
std::vector<Cd> sup_norm_samples(const DomainSpec& d, const ReferenceMap& ref,
                                 int boundary_samples = 2048, int interior_samples = 512);

template <class R>
ErrorCurve sup_error_curve(const DomainSpec& d, const OrthoBasis<R>& basis,
                           const ReferenceMap& ref, const std::vector<int>& n_list,
                           int boundary_samples = 2048, int interior_samples = 512) {
  for (size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1]) throw ValidationError("n-list must be ascending");
  if (!n_list.empty() && n_list.back() > basis.degree + 1)
    throw ValidationError("n-list exceeds the basis degree");
  const auto samples = sup_norm_samples(d, ref, boundary_samples, interior_samples);
  const BieberbachFamily<R> fam(basis, Cplx<R>::from_std(ref.z0()));
  ErrorCurve curve;
  curve.boundary_samples = boundary_samples;
  curve.interior_samples = interior_samples;
  std::vector<double> sup(n_list.size(), 0.0);
  for (const Cd z : samples) {
    const Cd pz = ref.phi(z);
    const auto all = fam.eval_all(Cplx<R>::from_std(z));
    for (size_t i = 0; i < n_list.size(); ++i) {
      const Cd bn = all[n_list[i] - 1].to_std();
      sup[i] = std::max(sup[i], std::abs(bn - pz));
    }
  }
  for (size_t i = 0; i < n_list.size(); ++i) curve.points.emplace_back(n_list[i], sup[i]);
  return curve;
}

RateFit fit_rate(const ErrorCurve& curve);

// Regression of log-distance against -1/|t - vertex|^(p-1). Sample values
// below the double underflow floor are dropped.
CuspFit fit_cusp_decay(const ReferenceMap& map, Cd vertex, double p,
                       const std::vector<Cd>& t_samples);
// Same regression on precomputed (|t|, log distance) pairs; used with the
// stable log evaluator and by the synthetic-model tests.
CuspFit fit_cusp_from_values(const std::vector<double>& abs_t,
                             const std::vector<double>& log_dist, double p);

template <class R>
DivergenceReport divergence_probe(const DomainSpec& d, const OrthoBasis<R>& basis,
                                  double x0, const std::vector<int>& n_caps,
                                  double residual_tol = 1e-6) {
  if (!d.symmetric_real_axis)
    throw ValidationError("divergence probe needs a domain symmetric in the real axis");
  if (d.xi && !(x0 > *d.xi))
    throw ValidationError("probe point must satisfy x0 > xi");
  if (n_caps.empty()) throw ValidationError("N-list is empty");
  for (size_t i = 1; i < n_caps.size(); ++i)
    if (n_caps[i] <= n_caps[i - 1]) throw ValidationError("N-list must be ascending");
  if (n_caps.back() > basis.degree + 1)
    throw ValidationError("N-list exceeds the basis degree");
  if (basis.residual > residual_tol)
    throw NumericalError("basis orthonormality residual " + std::to_string(basis.residual) +
                         " exceeds tolerance; use higher precision-bits");

  const BieberbachFamily<R> fam(basis, Cplx<R>{});
  const auto all = fam.eval_all(Cplx<R>(R(x0)));
  DivergenceReport rep;
  rep.x0 = x0;
  const int nmax = n_caps.back();
  for (int n = 1; n <= nmax; ++n)
    rep.values.emplace_back(n, static_cast<double>(bkm::abs(all[n - 1])));
  double run = 0;
  size_t ci = 0;
  for (int n = 1; n <= nmax; ++n) {
    run = std::max(run, rep.values[n - 1].second);
    if (ci < n_caps.size() && n == n_caps[ci]) {
      rep.sup_by_n.emplace_back(n, run);
      ++ci;
    }
  }
  rep.growth_factor = rep.sup_by_n.back().second / rep.sup_by_n.front().second;
  rep.verdict = rep.growth_factor >= 10.0 ? "growing" : "bounded";
  return rep;
}

struct KeldyshOptions {
  int stages = 1;
  int degree_budget = 120;
  double xi_start = 0.6;
  double alpha = M_SQRT1_2;
  double xi_step = 0.2;
  double delta_init = 1e-16;
  int delta_retries = 4;
  int order = 32;
  int panels_per_arc = 24;
  int threads = 0;
};

KeldyshResult keldysh_iterate(const KeldyshOptions& opt = {});

}  // namespace bkm
