#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "bkm/errors.hpp"
#include "bkm/linalg.hpp"
#include "bkm/quadrature.hpp"

namespace bkm {

// Hermitian matrix of complex area moments M[m][n] = <z^m, z^n> over the
// domain, computed by the Green-identity contour reduction
//   M[m][n] = (1 / (2i(n+1))) * contour integral of z^m conj(z)^{n+1} dz.
template <class R>
struct GramMatrix {
  int degree = 0;  // N; matrix is (N+1) x (N+1)
  uint64_t domain_hash = 0;
  uint64_t rule_digest = 0;
  std::vector<Cplx<R>> entries;  // row-major, Hermitian as stored

  static constexpr int precision_bits = PrecisionTraits<R>::bits;

  const Cplx<R>& at(int m, int n) const { return entries[size_t(m) * (degree + 1) + n]; }
  Cplx<R>& at(int m, int n) { return entries[size_t(m) * (degree + 1) + n]; }
  R area() const { return at(0, 0).re; }
};

using GramAny = std::variant<GramMatrix<double>, GramMatrix<Float106>, GramMatrix<Float212>>;

int gram_precision_bits(const GramAny& g);

namespace detail {

inline int thread_count() {
  if (const char* env = std::getenv("BKM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Deterministic parallel loop: the work item order inside each index is
// fixed, so thread partitioning cannot change any result bit.
template <class F>
void parallel_for(int n, F&& body, int threads) {
  if (threads <= 1 || n < 4) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        body(i);
      }
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Assemble the moment matrix. Entries with m <= n are summed over the nodes
// in index order (bit-reproducible regardless of threading); m > n comes from
// Hermitian symmetry. Positive definiteness is verified by a Cholesky probe.
template <class R>
GramMatrix<R> compute_gram(const DomainSpec& d, const QuadratureRule<R>& rule, int N,
                           int threads = 0, bool check_pd = true) {
  if (N < 0) throw ValidationError("gram degree must be >= 0");
  if (rule.domain_hash != fnv1a(d.id_hash))
    throw ValidationError("quadrature rule was built for a different domain");
  if (threads <= 0) threads = detail::thread_count();

  GramMatrix<R> g;
  g.degree = N;
  g.domain_hash = fnv1a(d.id_hash);
  g.rule_digest = rule.params_digest();
  g.entries.assign(size_t(N + 1) * (N + 1), Cplx<R>{});

  const size_t nn = rule.nodes.size();
  // z^m and conj(z)^{n+1} * w per node, blocked to bound memory
  const size_t block = 1024;
  std::vector<Cplx<R>> zp(block * (N + 1)), cp(block * (N + 1));
  struct Pair {
    int m, n;
  };
  std::vector<Pair> work;
  for (int m = 0; m <= N; ++m)
    for (int n = m; n <= N; ++n) work.push_back({m, n});

  for (size_t b0 = 0; b0 < nn; b0 += block) {
    const size_t bn = std::min(block, nn - b0);
    for (size_t j = 0; j < bn; ++j) {
      const Cplx<R>& z = rule.nodes[b0 + j];
      const Cplx<R> zb = conj(z);
      Cplx<R>* zr = &zp[j * (N + 1)];
      Cplx<R>* cr = &cp[j * (N + 1)];
      zr[0] = Cplx<R>(R(1));
      for (int m = 1; m <= N; ++m) zr[m] = zr[m - 1] * z;
      cr[0] = zb * rule.weights[b0 + j];
      for (int n = 1; n <= N; ++n) cr[n] = cr[n - 1] * zb;
    }
    detail::parallel_for(
        static_cast<int>(work.size()),
        [&](int wi) {
          const auto [m, n] = work[wi];
          Cplx<R> s;
          for (size_t j = 0; j < bn; ++j)
            s += zp[j * (N + 1) + m] * cp[j * (N + 1) + n];
          g.at(m, n) += s;
        },
        threads);
  }
  // divide by 2i(n+1) and mirror
  for (int m = 0; m <= N; ++m)
    for (int n = m; n <= N; ++n) {
      const Cplx<R> v = g.at(m, n) / Cplx<R>(R(0), R(2 * (n + 1)));
      g.at(m, n) = m == n ? Cplx<R>(v.re) : v;
      if (m != n) g.at(n, m) = conj(v);
    }

  if (!(g.area() > 0))
    throw NumericalError("computed area is not positive; check orientation/quadrature");
  if (check_pd) {
    CMat<R> W(N + 1, N + 1), L;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j) W(i, j) = conj(g.at(i, j));
    if (auto bad = cholesky(W, L))
      throw NumericalError("gram matrix is not positive definite at pivot " +
                           std::to_string(*bad) +
                           "; increase precision-bits or refine the quadrature rule");
  }
  return g;
}

// <p, q> = sum_{j,k} p_j conj(q_k) M[j][k] for coefficient vectors p, q.
template <class R>
Cplx<R> inner_product(const GramMatrix<R>& g, std::span<const Cplx<R>> p,
                      std::span<const Cplx<R>> q) {
  if (static_cast<int>(p.size()) > g.degree + 1 || static_cast<int>(q.size()) > g.degree + 1)
    throw ValidationError("coefficient vector degree exceeds the gram degree");
  Cplx<R> s;
  for (size_t j = 0; j < p.size(); ++j) {
    Cplx<R> row;
    for (size_t k = 0; k < q.size(); ++k)
      row += conj(q[k]) * g.at(static_cast<int>(j), static_cast<int>(k));
    s += p[j] * row;
  }
  return s;
}

// Binary and CSV serialization; the binary form round-trips bit-exactly.
template <class R>
void save_gram_binary(const std::string& path, const GramMatrix<R>& g);
GramAny load_gram_binary(const std::string& path);

template <class R>
std::string gram_to_csv(const GramMatrix<R>& g);

}  // namespace bkm
