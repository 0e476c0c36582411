#include "bkm/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace bkm {

namespace {

// Newton refinement of Legendre roots at precision R, seeded from the
// Chebyshev approximation. Converges quadratically.
template <class R>
void compute_gauss(int q, std::vector<R>& x, std::vector<R>& w) {
  using std::cos;
  x.resize(q);
  w.resize(q);
  const int iters = PrecisionTraits<R>::bits <= 53 ? 60 : (PrecisionTraits<R>::bits <= 106 ? 8 : 10);
  for (int i = 0; i < q; ++i) {
    R t(std::cos(M_PI * (i + 0.75) / (q + 0.5)));
    R p1(0), dp(0);
    for (int it = 0; it < iters; ++it) {
      R p0(1);
      p1 = t;
      for (int k = 2; k <= q; ++k) {
        const R p2 = (R(2 * k - 1) * t * p1 - R(k - 1) * p0) / R(k);
        p0 = p1;
        p1 = p2;
      }
      dp = R(q) * (t * p1 - p0) / (t * t - 1);
      const R dt = p1 / dp;
      t -= dt;
      using std::fabs;
      using boost::multiprecision::fabs;
      if (fabs(dt) < std::numeric_limits<double>::epsilon() * 1e-3 && it > 2 &&
          PrecisionTraits<R>::bits == 53)
        break;
    }
    // one more recurrence pass so dp matches the final t
    R p0(1);
    p1 = t;
    for (int k = 2; k <= q; ++k) {
      const R p2 = (R(2 * k - 1) * t * p1 - R(k - 1) * p0) / R(k);
      p0 = p1;
      p1 = p2;
    }
    dp = R(q) * (t * p1 - p0) / (t * t - 1);
    x[i] = t;
    w[i] = R(2) / ((1 - t * t) * dp * dp);
  }
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
}

template <class R>
struct GaussCache {
  std::mutex mu;
  std::map<int, std::pair<std::vector<R>, std::vector<R>>> table;
};

template <class R>
GaussCache<R>& gauss_cache() {
  static GaussCache<R> cache;
  return cache;
}

}  // namespace

template <class R>
void gauss_legendre(int q, std::vector<R>& x, std::vector<R>& w) {
  auto& cache = gauss_cache<R>();
  std::lock_guard<std::mutex> lock(cache.mu);
  auto it = cache.table.find(q);
  if (it == cache.table.end()) {
    std::vector<R> cx, cw;
    compute_gauss<R>(q, cx, cw);
    it = cache.table.emplace(q, std::make_pair(std::move(cx), std::move(cw))).first;
  }
  x = it->second.first;
  w = it->second.second;
}

template void gauss_legendre<double>(int, std::vector<double>&, std::vector<double>&);
template void gauss_legendre<Float106>(int, std::vector<Float106>&, std::vector<Float106>&);
template void gauss_legendre<Float212>(int, std::vector<Float212>&, std::vector<Float212>&);

PanelSchedule make_panel_schedule(const DomainSpec& d, int order, int panels_per_arc,
                                  double grading_ratio, int grading_depth) {
  PanelSchedule s;
  s.order = order;
  s.panels_per_arc = panels_per_arc;
  s.grading_ratio = grading_ratio;
  s.grading_depth = grading_depth;
  const double vtol = 1e-9 * std::max(1.0, d.diameter);
  for (int ai = 0; ai < static_cast<int>(d.arcs.size()); ++ai) {
    const bool grade_start = d.is_singular_vertex(d.arcs[ai].start, vtol);
    const bool grade_end = d.is_singular_vertex(d.arcs[ai].end, vtol);
    const double h = 1.0 / panels_per_arc;
    for (int i = 0; i < panels_per_arc; ++i) {
      const double t0 = i * h, t1 = (i + 1) * h;
      if (i == 0 && grade_start) {
        // geometric subdivision toward t=0
        double hi = t1;
        std::vector<std::pair<double, double>> sub;
        for (int j = 0; j < grading_depth; ++j) {
          const double lo = hi * grading_ratio;
          sub.emplace_back(lo, hi);
          hi = lo;
        }
        sub.emplace_back(0.0, hi);
        for (auto it = sub.rbegin(); it != sub.rend(); ++it)
          s.panels.push_back({ai, it->first, it->second});
        continue;
      }
      if (i == panels_per_arc - 1 && grade_end) {
        double lo = t0;
        for (int j = 0; j < grading_depth; ++j) {
          const double hi2 = 1.0 - (1.0 - lo) * grading_ratio;
          s.panels.push_back({ai, lo, hi2});
          lo = hi2;
        }
        s.panels.push_back({ai, lo, 1.0});
        continue;
      }
      s.panels.push_back({ai, t0, t1});
    }
  }
  return s;
}

}  // namespace bkm
