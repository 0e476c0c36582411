#include "bkm/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace bkm {

namespace {

struct LinFit {
  double intercept = 0, slope = 0, r2 = 0;
};

LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinFit f;
  if (sxx == 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace

std::vector<Cd> sup_norm_samples(const DomainSpec& d, const ReferenceMap& ref,
                                 int boundary_samples, int interior_samples) {
  std::vector<Cd> out;
  out.reserve(boundary_samples + interior_samples);
  const double r0 = ref.R0();
  const int arcs = static_cast<int>(d.arcs.size());
  const int per_arc = std::max(1, boundary_samples / arcs);
  const double base_off = 1e-3 * std::max(1.0, d.diameter);

  auto clearance = [&](Cd z) {
    double c = 1e300;
    for (const auto& cu : d.cusps) {
      const double dist = std::abs(z - cu.vertex);
      c = std::min(c, dist * dist / 16.0);
    }
    for (const auto& co : d.corners) c = std::min(c, std::abs(z - co.vertex) / 4.0);
    return c;
  };
  auto keep_if_inside = [&](Cd p) {
    Cd v;
    try {
      v = ref.phi(p);
    } catch (const NumericalError&) {
      return;  // inversion failed: not an interior point
    }
    if (std::abs(v) < r0 * (1 - 1e-12)) out.push_back(p);
  };

  for (int ai = 0; ai < arcs; ++ai) {
    for (int i = 0; i < per_arc; ++i) {
      const double t = (i + 0.5) / per_arc;
      const auto [z, dz] = d.boundary_point<double>(ai, t);
      const Cd zc = z.to_std(), vc = dz.to_std();
      const double sp = std::abs(vc);
      if (sp == 0) continue;
      const Cd normal_in = Cd(0, 1) * vc / sp;  // interior on the left
      const double off = std::min(base_off, clearance(zc));
      if (off <= 0) continue;
      keep_if_inside(zc + off * normal_in);
    }
  }
  const int nint = std::max(1, interior_samples);
  const size_t stride = std::max<size_t>(1, d.boundary_sample.size() / nint);
  for (size_t i = 0; i < d.boundary_sample.size(); i += stride) {
    const Cd p = d.z0 + 0.55 * (d.boundary_sample[i] - d.z0);
    keep_if_inside(p);
  }
  return out;
}

RateFit fit_rate(const ErrorCurve& curve) {
  std::vector<int> ns;
  std::vector<double> ys;
  for (auto [n, e] : curve.points)
    if (e > 1e-14 && e < 1.0) {
      ns.push_back(n);
      ys.push_back(std::log(e));
    }
  if (ns.size() < 6)
    throw ValidationError("rate fit needs at least 6 points with errors in (1e-14, 1)");
  RateFit best;
  best.r2 = -1e300;
  for (int ri = 1; ri <= 19; ++ri) {
    const double r = 0.05 * ri;
    std::vector<double> xs(ns.size());
    for (size_t i = 0; i < ns.size(); ++i) xs[i] = std::pow(double(ns[i]), r);
    const LinFit f = linear_fit(xs, ys);
    if (f.slope >= 0) continue;  // q must lie in (0,1)
    if (f.r2 > best.r2) {
      best.r2 = f.r2;
      best.r = r;
      best.C = std::exp(f.intercept);
      best.q = std::exp(f.slope);
    }
  }
  if (best.r2 < 0) throw NumericalError("rate fit failed: no decreasing model matched");
  best.n_min = ns.front();
  best.n_max = ns.back();
  return best;
}

CuspFit fit_cusp_from_values(const std::vector<double>& abs_t,
                             const std::vector<double>& log_dist, double p) {
  std::vector<double> xs, ys;
  for (size_t i = 0; i < abs_t.size(); ++i) {
    if (!std::isfinite(log_dist[i])) continue;  // underflowed values are dropped
    xs.push_back(-1.0 / std::pow(abs_t[i], p - 1.0));
    ys.push_back(log_dist[i]);
  }
  if (xs.size() < 4)
    throw ValidationError("cusp fit needs at least 4 usable sample points");
  const LinFit f = linear_fit(xs, ys);
  CuspFit fit;
  fit.c = f.slope;  // log E = log C + c * (-1/|t|^(p-1))
  fit.C = std::exp(f.intercept);
  fit.p_used = p;
  fit.r2 = f.r2;
  fit.points_used = static_cast<int>(xs.size());
  return fit;
}

CuspFit fit_cusp_decay(const ReferenceMap& map, Cd vertex, double p,
                       const std::vector<Cd>& t_samples) {
  std::vector<double> abs_t, log_dist;
  for (Cd t : t_samples) {
    abs_t.push_back(std::abs(t - vertex));
    if (map.kind() == ReferenceMap::Kind::Lune) {
      log_dist.push_back(map.log_abs_phi_minus_cusp(t, t.imag() >= 0 ? +1 : -1));
    } else {
      const double dist = std::abs(map.phi(t) - map.phi(vertex));
      log_dist.push_back(dist > 0 ? std::log(dist)
                                  : -std::numeric_limits<double>::infinity());
    }
  }
  return fit_cusp_from_values(abs_t, log_dist, p);
}

namespace {

using R212 = Float212;
using C212r = Cplx<Float212>;

struct StageBasis {
  DomainSpec domain;
  OrthoBasis<R212> basis;
};

OrthoBasis<R212> basis_for(const DomainSpec& d, int degree, const KeldyshOptions& opt) {
  const auto rule = build_rule<R212>(d, opt.order, opt.panels_per_arc, 0.5, 40);
  const auto gram = compute_gram<R212>(d, rule, degree, opt.threads);
  return orthonormalize_cholesky(gram);
}

// samples of the closed unit disk for the stability bound; the maximum of a
// polynomial modulus lives on |z| = 1, interior points are a sanity extra
std::vector<Cd> unit_disk_samples() {
  std::vector<Cd> pts;
  for (int i = 0; i < 256; ++i) pts.push_back(std::polar(1.0, 2 * M_PI * i / 256));
  for (int i = 0; i < 32; ++i) pts.push_back(std::polar(0.5, 2 * M_PI * i / 32));
  pts.push_back({0, 0});
  return pts;
}

double stability_gap(const OrthoBasis<R212>& b1, const OrthoBasis<R212>& b2, int n_max) {
  const BieberbachFamily<R212> f1(b1, C212r{});
  const BieberbachFamily<R212> f2(b2, C212r{});
  double worst = 0;
  for (const Cd z : unit_disk_samples()) {
    const auto v1 = f1.eval_all(C212r::from_std(z));
    const auto v2 = f2.eval_all(C212r::from_std(z));
    for (int n = 1; n <= n_max; ++n) {
      const double gap = static_cast<double>(bkm::abs(v1[n - 1] - v2[n - 1]));
      worst = std::max(worst, gap);
    }
  }
  return worst;
}

// every boundary sample of `inner` must be inside or on the boundary of
// `outer`
bool contains(const DomainSpec& outer, const DomainSpec& inner) {
  for (const Cd p : inner.boundary_sample) {
    try {
      if (outer.winding_number(p) == 0) return false;
    } catch (const ValidationError&) {
      // on the shared part of the boundary: contained
    }
  }
  return true;
}

}  // namespace

KeldyshResult keldysh_iterate(const KeldyshOptions& opt) {
  KeldyshResult result;
  result.degree_budget = opt.degree_budget;
  if (opt.stages < 0 || opt.stages > 3)
    throw ValidationError("keldysh iteration supports 0 to 3 stages");
  if (opt.stages == 0) {
    result.completed = true;
    result.note = "no stages requested";
    return result;
  }

  DomainSpec domain = make_lens(opt.xi_start, opt.alpha, Cd(0, 0));
  double xi_m = opt.xi_start;
  double delta_prev = 0;

  for (int m = 1; m <= opt.stages; ++m) {
    const double xi_next = xi_m + opt.xi_step;
    const double target = 2.0 * m;
    OrthoBasis<R212> basis = basis_for(domain, opt.degree_budget, opt);
    const BieberbachFamily<R212> fam(basis, C212r{});
    const auto vals = fam.eval_all(C212r(R212(xi_next)));

    KeldyshStage stage;
    stage.domain_hash = domain.id_hash;
    stage.xi_next = xi_next;
    stage.target = target;
    int n_m = 0;
    for (int n = 1; n <= opt.degree_budget; ++n) {
      if (static_cast<double>(bkm::abs(vals[n - 1])) > target) {
        n_m = n;
        break;
      }
    }
    if (n_m == 0) {
      result.stages.push_back(stage);
      result.note = "degree budget exhausted searching stage " + std::to_string(m);
      return result;
    }
    stage.n_m = n_m;
    stage.certificate_value = static_cast<double>(bkm::abs(vals[n_m - 1]));
    const auto cert = bieberbach_from_basis(basis, n_m, C212r{});
    for (const auto& c : cert.coeffs) {
      stage.certificate_coeffs.push_back(real_to_string(c.re));
      stage.certificate_coeffs.push_back(real_to_string(c.im));
    }

    // next domain: the lens with its corner moved to xi_next through a thin
    // spike, taken close enough to the previous continuum that the first n_m
    // Bieberbach polynomials barely move
    stage.stability_bound = std::pow(2.0, -(m + 1));
    double delta = m == 1 ? opt.delta_init : 8 * delta_prev;
    bool stable = false;
    DomainSpec next;
    for (int attempt = 0; attempt <= opt.delta_retries; ++attempt) {
      next = make_lens_spike(opt.xi_start, opt.alpha, xi_next, Float212(delta), Cd(0, 0));
      if (!contains(next, domain)) {
        result.stages.push_back(stage);
        result.note = "containment violation at stage " + std::to_string(m);
        return result;
      }
      OrthoBasis<R212> next_basis = basis_for(next, n_m, opt);
      stage.stability_max = stability_gap(basis, next_basis, n_m);
      if (stage.stability_max < stage.stability_bound) {
        stable = true;
        break;
      }
      delta *= 1e-6;
    }
    stage.delta = delta;
    result.stages.push_back(stage);
    if (!stable) {
      result.note = "stability bound not reached at stage " + std::to_string(m);
      return result;
    }
    domain = std::move(next);
    xi_m = xi_next;
    delta_prev = delta;
  }
  result.completed = true;
  result.note = "all requested stages certified";
  return result;
}

}  // namespace bkm
