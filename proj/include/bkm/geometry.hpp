#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "bkm/complex.hpp"
#include "bkm/errors.hpp"
#include "bkm/precision.hpp"

namespace bkm {

using C212 = Cplx<Float212>;

// Arc parameters are stored at 212-bit precision so that evaluating the
// boundary at any working precision keeps shared arc endpoints consistent
// far below quadrature tolerances. All arcs are parametrized over t in [0,1].

struct SegmentArc {
  C212 p0, p1;
};

// z(t) = center + radius * e^{i*(ang0 + t*(ang1-ang0))}; ang1 < ang0 gives a
// clockwise traversal.
struct CircularArc {
  C212 center;
  Float212 radius;
  Float212 ang0, ang1;
};

// Power-cusp branch y = sign * coef * x^expo in a local frame: x runs linearly
// from x_from to x_to, z = vertex + e^{i*rot} * (x + i*sign*coef*x^expo).
struct PowerCuspArc {
  C212 vertex;
  Float212 rot;
  Float212 coef, expo;
  Float212 x_from, x_to;
  bool lower = false;
};

// Truncated Laurent series on the unit circle: z(t) = sum_k c[k] w^{kmin+k}
// with w = e^{2*pi*i*(u0 + t*(u1-u0))}. Covers images of the circle under
// polynomial maps (kmin=0) and the ellipse (kmin=-1).
struct SeriesArc {
  std::vector<C212> coeffs;
  int kmin = 0;
  Float212 u0, u1;
};

using ArcShape = std::variant<SegmentArc, CircularArc, PowerCuspArc, SeriesArc>;

struct ArcSpec {
  ArcShape shape;
  Cd start, end;  // derived endpoints at double precision
  const char* kind_name() const;
};

// An x^p-type interior zero angle at `vertex`. In the local frame obtained by
// rotating by -rot (the cusp axis maps to +x), boundary points must satisfy
// c1*x^P <= |y| <= c2*x^p for x in (0, x_check].
struct CuspAnnotation {
  Cd vertex;
  double rot = 0;
  double p = 2, P = 2;
  double c1 = 0, c2 = 0;
  double x_check = 0.1;
};

struct CornerAnnotation {
  Cd vertex;
  double alpha;  // interior angle = alpha * pi
};

struct DomainSpec {
  std::vector<ArcSpec> arcs;
  std::vector<CuspAnnotation> cusps;
  std::vector<CornerAnnotation> corners;
  Cd z0;
  bool symmetric_real_axis = false;
  std::optional<double> xi;  // designated real boundary vertex, when one exists
  std::string gallery;       // gallery name or "custom"
  std::string id_hash;       // hex digest over all defining fields

  std::vector<Cd> boundary_sample;  // dense positively-oriented sample (cached)
  double diameter = 0;

  // Position and complex velocity on arc `arc_index` at parameter t in [0,1].
  template <class R>
  std::pair<Cplx<R>, Cplx<R>> boundary_point(int arc_index, const R& t) const;

  // 1 for interior points, 0 for exterior. Throws ValidationError when z is
  // within 1e-12*diam of the sampled boundary.
  int winding_number(Cd z) const;

  std::vector<Cd> convex_hull() const;  // hull of the boundary sample
  bool is_singular_vertex(Cd z, double tol) const;
};

// Gallery constructors. All validate the resulting spec.
DomainSpec make_disk(double radius, Cd z0);
DomainSpec make_ellipse(double a, double b, Cd z0);
DomainSpec make_square(double half_side, Cd z0);
DomainSpec make_lune(Cd z0 = Cd(1.4, 0.0));
// Jordan cusp domain: inversion of a half-strip. Three circular arcs, one
// x^2-type cusp at -1/2 opening along the positive real axis, two corners
// where the map unfolds analytically. Real section (-1/2, 1/2).
DomainSpec make_drop(Cd z0 = Cd(0, 0));
DomainSpec make_lens(double xi, double alpha, Cd z0 = Cd(0, 0));
DomainSpec make_psi_image(const std::vector<Cd>& psi_coeffs);
// Lens with its corner moved from xi to xi2 via a spike of half-width delta
// along the real axis; used by the Keldysh iteration stages.
DomainSpec make_lens_spike(double xi, double alpha, double xi2, const Float212& delta,
                           Cd z0 = Cd(0, 0));

// Build from a structured config document (JSON text; see configs/ for the
// schema). Accepts either {"gallery": ...} or an explicit {"arcs": [...]}
// form.
DomainSpec build_domain(const std::string& config_json_text);
DomainSpec build_domain_file(const std::string& path);

// Validation used by build_domain / the gallery constructors; throws
// ValidationError naming the offending arc on failure.
void validate_domain(DomainSpec& d, int sample_density = 512);

std::string domain_canonical_text(const DomainSpec& d);

// Interior angle (in units of pi) formed at the junction between arc i's end
// and arc (i+1)'s start, measured through the domain.
double junction_angle(const DomainSpec& d, int arc_index);

namespace detail {

template <class R>
R cvt(const Float212& x) {
  return static_cast<R>(x);
}
template <class R>
Cplx<R> cvt(const C212& z) {
  return {static_cast<R>(z.re), static_cast<R>(z.im)};
}

template <class R>
std::pair<Cplx<R>, Cplx<R>> eval_arc(const ArcShape& shape, const R& t) {
  using std::cos;
  using std::pow;
  using std::sin;
  using boost::multiprecision::cos;
  using boost::multiprecision::pow;
  using boost::multiprecision::sin;
  using C = Cplx<R>;
  if (const auto* s = std::get_if<SegmentArc>(&shape)) {
    const C p0 = cvt<R>(s->p0), p1 = cvt<R>(s->p1);
    const C d = p1 - p0;
    return {p0 + t * d, d};
  }
  if (const auto* c = std::get_if<CircularArc>(&shape)) {
    const R a0 = cvt<R>(c->ang0), a1 = cvt<R>(c->ang1), r = cvt<R>(c->radius);
    const R th = a0 + t * (a1 - a0);
    const C e{cos(th), sin(th)};
    const C z = cvt<R>(c->center) + r * e;
    const C v = C(R(0), a1 - a0) * r * e;
    return {z, v};
  }
  if (const auto* p = std::get_if<PowerCuspArc>(&shape)) {
    const R xf = cvt<R>(p->x_from), xt = cvt<R>(p->x_to);
    const R x = xf + t * (xt - xf);
    const R cf = cvt<R>(p->coef), ex = cvt<R>(p->expo);
    const R sgn = p->lower ? R(-1) : R(1);
    const C local{x, sgn * cf * pow(x, ex)};
    const C dlocal{R(1), sgn * cf * ex * pow(x, ex - 1)};
    const R rot = cvt<R>(p->rot);
    const C fr{cos(rot), sin(rot)};
    return {cvt<R>(p->vertex) + fr * local, fr * dlocal * (xt - xf)};
  }
  const auto& s = std::get<SeriesArc>(shape);
  const R two_pi = 2 * boost::math::constants::pi<R>();
  const R u0 = cvt<R>(s.u0), u1 = cvt<R>(s.u1);
  const R u = u0 + t * (u1 - u0);
  const C w = cexp(Cplx<R>(R(0), two_pi * u));
  // w^kmin, |w| = 1 so negative powers are conjugates
  C wk{R(1), R(0)};
  const C wstep = s.kmin >= 0 ? w : conj(w);
  for (int i = 0; i < std::abs(s.kmin); ++i) wk = wk * wstep;
  C z{R(0), R(0)}, dz{R(0), R(0)};
  for (size_t j = 0; j < s.coeffs.size(); ++j) {
    const int k = s.kmin + static_cast<int>(j);
    const C ck = cvt<R>(s.coeffs[j]);
    z += ck * wk;
    dz += ck * wk * Cplx<R>(R(0), two_pi * R(k) * (u1 - u0));
    wk = wk * w;
  }
  return {z, dz};
}

}  // namespace detail

template <class R>
std::pair<Cplx<R>, Cplx<R>> DomainSpec::boundary_point(int arc_index, const R& t) const {
  if (arc_index < 0 || arc_index >= static_cast<int>(arcs.size()))
    throw ValidationError("arc index out of range: " + std::to_string(arc_index));
  if (t < R(0) || t > R(1))
    throw ValidationError("arc parameter out of range [0,1] on arc " +
                          std::to_string(arc_index));
  return detail::eval_arc(arcs[arc_index].shape, t);
}

}  // namespace bkm
