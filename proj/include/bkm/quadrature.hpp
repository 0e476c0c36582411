#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "bkm/errors.hpp"
#include "bkm/geometry.hpp"
#include "bkm/hash.hpp"

namespace bkm {

// Panel schedule in arc-parameter space, shared by all working precisions.
// Panels adjacent to cusp/corner vertices are subdivided geometrically
// toward the vertex.
struct PanelSchedule {
  struct Panel {
    int arc;
    double t0, t1;
  };
  std::vector<Panel> panels;
  int order = 24;
  int panels_per_arc = 8;
  double grading_ratio = 0.5;
  int grading_depth = 40;

  uint64_t digest() const {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "o%d;p%d;g%.17g;d%d", order, panels_per_arc,
                  grading_ratio, grading_depth);
    return fnv1a(buf);
  }
};

PanelSchedule make_panel_schedule(const DomainSpec& d, int order, int panels_per_arc,
                                  double grading_ratio, int grading_depth = 40);

// Gauss-Legendre points on [-1,1] at the requested precision. Cached.
template <class R>
void gauss_legendre(int q, std::vector<R>& x, std::vector<R>& w);

template <class R>
struct QuadratureRule {
  std::vector<Cplx<R>> nodes;
  std::vector<Cplx<R>> weights;  // gauss weight * panel halfwidth * dz/dt
  PanelSchedule schedule;
  uint64_t domain_hash = 0;

  uint64_t params_digest() const { return schedule.digest(); }
  int order() const { return schedule.order; }
  double grading_ratio() const { return schedule.grading_ratio; }

  R sum_weights_abs() const {
    R s = 0;
    for (const auto& w : weights) s += bkm::abs(w);
    return s;
  }
  Cplx<R> sum_weights() const {
    Cplx<R> s;
    for (const auto& w : weights) s += w;
    return s;
  }
  // (1/2i) * sum conj(z) w, the signed area of the enclosed region
  R area() const {
    Cplx<R> s;
    for (size_t i = 0; i < nodes.size(); ++i) s += conj(nodes[i]) * weights[i];
    return s.im / 2;
  }
};

template <class R>
QuadratureRule<R> build_rule(const DomainSpec& d, int order = 24, int panels_per_arc = 8,
                             double grading_ratio = 0.5, int grading_depth = 40) {
  if (order < 2) throw ValidationError("quadrature order must be >= 2");
  if (panels_per_arc < 1) throw ValidationError("panels-per-arc must be >= 1");
  if (!(grading_ratio > 0 && grading_ratio < 1))
    throw ValidationError("grading-ratio must lie in (0,1)");
  QuadratureRule<R> rule;
  rule.schedule = make_panel_schedule(d, order, panels_per_arc, grading_ratio, grading_depth);
  rule.domain_hash = fnv1a(d.id_hash);
  std::vector<R> gx, gw;
  gauss_legendre<R>(order, gx, gw);
  rule.nodes.reserve(rule.schedule.panels.size() * order);
  rule.weights.reserve(rule.schedule.panels.size() * order);
  for (const auto& p : rule.schedule.panels) {
    const R mid = (R(p.t0) + R(p.t1)) / 2;
    const R half = (R(p.t1) - R(p.t0)) / 2;
    for (int i = 0; i < order; ++i) {
      const R t = mid + half * gx[i];
      auto [z, dz] = d.boundary_point<R>(p.arc, t);
      rule.nodes.push_back(z);
      rule.weights.push_back(dz * (half * gw[i]));
    }
  }
  return rule;
}

template <class R, class F>
Cplx<R> contour_integral(const QuadratureRule<R>& rule, F&& f) {
  using std::isnan;
  using boost::multiprecision::isnan;
  Cplx<R> s;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const Cplx<R> v = f(rule.nodes[i], conj(rule.nodes[i]));
    if (isnan(v.re) || isnan(v.im))
      throw NumericalError("integrand returned a non-finite value at a quadrature node");
    s += v * rule.weights[i];
  }
  return s;
}

// CSV export: node-re, node-im, weight-re, weight-im.
template <class R>
std::string rule_to_csv(const QuadratureRule<R>& rule) {
  std::string out = "node_re,node_im,weight_re,weight_im\n";
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    out += real_to_string(rule.nodes[i].re) + "," + real_to_string(rule.nodes[i].im) + "," +
           real_to_string(rule.weights[i].re) + "," + real_to_string(rule.weights[i].im) +
           "\n";
  }
  return out;
}

}  // namespace bkm
