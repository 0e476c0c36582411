#include "bkm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bkm/hash.hpp"

namespace bkm {

using json = nlohmann::json;
namespace mp = boost::multiprecision;

const char* ArcSpec::kind_name() const {
  if (std::holds_alternative<SegmentArc>(shape)) return "segment";
  if (std::holds_alternative<CircularArc>(shape)) return "circular";
  if (std::holds_alternative<PowerCuspArc>(shape)) return "power_cusp";
  return "series";
}

namespace {

Cd eval_d(const ArcShape& shape, double t) {
  return detail::eval_arc<double>(shape, t).first.to_std();
}

void set_endpoints(ArcSpec& a) {
  a.start = eval_d(a.shape, 0.0);
  a.end = eval_d(a.shape, 1.0);
}

double dist_point_segment(Cd z, Cd a, Cd b) {
  const Cd d = b - a;
  const double l2 = std::norm(d);
  if (l2 == 0) return std::abs(z - a);
  double t = ((z.real() - a.real()) * d.real() + (z.imag() - a.imag()) * d.imag()) / l2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * d));
}

int orient(Cd a, Cd b, Cd c) {
  const double v = (b.real() - a.real()) * (c.imag() - a.imag()) -
                   (b.imag() - a.imag()) * (c.real() - a.real());
  return (v > 0) - (v < 0);
}

bool segments_cross(Cd a, Cd b, Cd c, Cd d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

std::string fmt_c212(const C212& z) {
  return real_to_string(z.re) + "," + real_to_string(z.im);
}

}  // namespace

std::string domain_canonical_text(const DomainSpec& d) {
  std::ostringstream os;
  os << "gallery=" << d.gallery << ";z0=" << real_to_string(d.z0.real()) << ","
     << real_to_string(d.z0.imag()) << ";sym=" << d.symmetric_real_axis;
  if (d.xi) os << ";xi=" << real_to_string(*d.xi);
  for (const auto& a : d.arcs) {
    os << ";arc:" << a.kind_name() << ":";
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SegmentArc>) {
            os << fmt_c212(s.p0) << ":" << fmt_c212(s.p1);
          } else if constexpr (std::is_same_v<T, CircularArc>) {
            os << fmt_c212(s.center) << ":" << real_to_string(s.radius) << ":"
               << real_to_string(s.ang0) << ":" << real_to_string(s.ang1);
          } else if constexpr (std::is_same_v<T, PowerCuspArc>) {
            os << fmt_c212(s.vertex) << ":" << real_to_string(s.rot) << ":"
               << real_to_string(s.coef) << ":" << real_to_string(s.expo) << ":"
               << real_to_string(s.x_from) << ":" << real_to_string(s.x_to) << ":"
               << s.lower;
          } else {
            os << s.kmin << ":" << real_to_string(s.u0) << ":" << real_to_string(s.u1);
            for (const auto& c : s.coeffs) os << ":" << fmt_c212(c);
          }
        },
        a.shape);
  }
  for (const auto& c : d.cusps)
    os << ";cusp:" << real_to_string(c.vertex.real()) << "," << real_to_string(c.vertex.imag())
       << ":" << real_to_string(c.rot) << ":" << real_to_string(c.p) << ":"
       << real_to_string(c.P) << ":" << real_to_string(c.c1) << ":" << real_to_string(c.c2)
       << ":" << real_to_string(c.x_check);
  for (const auto& c : d.corners)
    os << ";corner:" << real_to_string(c.vertex.real()) << ","
       << real_to_string(c.vertex.imag()) << ":" << real_to_string(c.alpha);
  return os.str();
}

int DomainSpec::winding_number(Cd z) const {
  const auto& s = boundary_sample;
  const double tol = 1e-12 * std::max(1.0, diameter);
  double mind = 1e300;
  for (size_t i = 0; i < s.size(); ++i) {
    mind = std::min(mind, dist_point_segment(z, s[i], s[(i + 1) % s.size()]));
    if (mind <= tol)
      throw ValidationError("point too close to the boundary for a winding test");
  }
  double total = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    const Cd a = s[i] - z, b = s[(i + 1) % s.size()] - z;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

std::vector<Cd> DomainSpec::convex_hull() const {
  std::vector<Cd> pts = boundary_sample;
  std::sort(pts.begin(), pts.end(), [](Cd a, Cd b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Cd> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool DomainSpec::is_singular_vertex(Cd z, double tol) const {
  for (const auto& c : cusps)
    if (std::abs(z - c.vertex) <= tol) return true;
  for (const auto& c : corners)
    if (std::abs(z - c.vertex) <= tol) return true;
  return false;
}

double junction_angle(const DomainSpec& d, int arc_index) {
  const int n = static_cast<int>(d.arcs.size());
  const auto in = detail::eval_arc<double>(d.arcs[arc_index].shape, 1.0);
  const auto out = detail::eval_arc<double>(d.arcs[(arc_index + 1) % n].shape, 0.0);
  const Cd u = -in.second.to_std();  // back along the incoming arc
  const Cd v = out.second.to_std();
  double ang = std::arg(u / v);
  if (ang < 0) ang += 2 * M_PI;
  return ang / M_PI;
}

void validate_domain(DomainSpec& d, int sample_density) {
  if (d.arcs.empty()) throw ValidationError("domain has no arcs");
  for (auto& a : d.arcs) set_endpoints(a);

  // dense cached sample, positively oriented, used for winding/hull/diameter
  const int per_arc = std::max<int>(64, 4096 / static_cast<int>(d.arcs.size()));
  d.boundary_sample.clear();
  for (const auto& a : d.arcs)
    for (int i = 0; i < per_arc; ++i)
      d.boundary_sample.push_back(eval_d(a.shape, (i + 0.5) / per_arc));

  double diam = 0;
  Cd lo = d.boundary_sample[0], hi = lo;
  for (const auto& p : d.boundary_sample) {
    lo = {std::min(lo.real(), p.real()), std::min(lo.imag(), p.imag())};
    hi = {std::max(hi.real(), p.real()), std::max(hi.imag(), p.imag())};
  }
  diam = std::abs(hi - lo);
  d.diameter = diam;

  // cyclic endpoint continuity
  const double ctol = 1e-13 * std::max(1.0, diam);
  const int n = static_cast<int>(d.arcs.size());
  for (int i = 0; i < n; ++i) {
    const Cd gap = d.arcs[i].end - d.arcs[(i + 1) % n].start;
    if (std::abs(gap) > ctol)
      throw ValidationError("boundary not closed: arc " + std::to_string(i) +
                            " ends " + std::to_string(std::abs(gap)) +
                            " away from the start of arc " + std::to_string((i + 1) % n));
  }

  // self-intersection on a coarser sample; tangential contact at annotated
  // vertices is legitimate and skipped
  const int si_per_arc = std::max<int>(8, sample_density / n);
  struct Seg {
    Cd a, b;
    int arc;
    int idx;
  };
  std::vector<Seg> segs;
  for (int ai = 0; ai < n; ++ai) {
    Cd prev = d.arcs[ai].start;
    for (int i = 1; i <= si_per_arc; ++i) {
      Cd cur = i == si_per_arc ? d.arcs[ai].end : eval_d(d.arcs[ai].shape, double(i) / si_per_arc);
      segs.push_back({prev, cur, ai, i - 1});
      prev = cur;
    }
  }
  const double vtol = 1e-6 * std::max(1.0, diam);
  // Chords of two arcs that meet tangentially at a cusp can cross even when
  // the arcs themselves do not; the cusp envelope check below owns that
  // neighborhood, so pairs jointly inside a cusp radius are not tested here.
  auto in_cusp_zone = [&](const Seg& s1, const Seg& s2) {
    for (const auto& c : d.cusps) {
      const double r = 1.2 * c.x_check;
      if (std::abs(s1.a - c.vertex) < r && std::abs(s1.b - c.vertex) < r &&
          std::abs(s2.a - c.vertex) < r && std::abs(s2.b - c.vertex) < r)
        return true;
    }
    return false;
  };
  const int total = static_cast<int>(segs.size());
  for (int i = 0; i < total; ++i) {
    for (int j = i + 2; j < total; ++j) {
      if (i == 0 && j == total - 1) continue;  // cyclically adjacent
      const Seg &s1 = segs[i], &s2 = segs[j];
      if (d.is_singular_vertex(s1.a, vtol) || d.is_singular_vertex(s1.b, vtol) ||
          d.is_singular_vertex(s2.a, vtol) || d.is_singular_vertex(s2.b, vtol))
        continue;
      if (in_cusp_zone(s1, s2)) continue;
      if (segments_cross(s1.a, s1.b, s2.a, s2.b))
        throw ValidationError("boundary self-intersects near arc " + std::to_string(s1.arc) +
                              " / arc " + std::to_string(s2.arc));
    }
  }

  // orientation and base point
  int w;
  try {
    w = d.winding_number(d.z0);
  } catch (const ValidationError&) {
    throw ValidationError("z0 is on (or too close to) the boundary");
  }
  if (w != 1)
    throw ValidationError(w == 0 ? "z0 lies outside the domain"
                                 : "boundary is not positively oriented about z0");

  // conjugation symmetry of the arc list, endpoint-level
  if (d.symmetric_real_axis) {
    const double stol = 1e-12 * std::max(1.0, diam);
    for (const auto& a : d.arcs) {
      const Cd cs = std::conj(a.start), ce = std::conj(a.end);
      bool found = false;
      for (const auto& b : d.arcs) {
        if ((std::abs(b.start - ce) < stol && std::abs(b.end - cs) < stol) ||
            (std::abs(b.start - cs) < stol && std::abs(b.end - ce) < stol)) {
          found = true;
          break;
        }
      }
      if (!found)
        throw ValidationError("domain marked symmetric but the arc list is not "
                              "conjugation-invariant");
    }
  }

  // cusp envelope: c1*x^P <= |y| <= c2*x^p on local sample points
  for (const auto& c : d.cusps) {
    if (!(c.P >= c.p && c.p > 1) || !(0 < c.c1 && c.c1 <= c.c2))
      throw ValidationError("cusp annotation violates P >= p > 1, 0 < c1 <= c2");
    const Cd frame = std::polar(1.0, -c.rot);
    int checked = 0;
    for (const auto& z : d.boundary_sample) {
      const Cd local = frame * (z - c.vertex);
      const double x = local.real(), y = std::abs(local.imag());
      if (x <= 0 || x > c.x_check || std::abs(z - c.vertex) > 1.2 * c.x_check) continue;
      ++checked;
      if (y < c.c1 * std::pow(x, c.P) - 1e-14 || y > c.c2 * std::pow(x, c.p) + 1e-14)
        throw ValidationError("cusp envelope violated at boundary point near vertex");
    }
    if (checked < 8)
      throw ValidationError("too few boundary samples near an annotated cusp vertex");
  }

  d.id_hash = hex64(fnv1a(domain_canonical_text(d)));
}

// ---------------------------------------------------------------------------
// gallery constructors

namespace {

Float212 pi212() { return boost::math::constants::pi<Float212>(); }

DomainSpec finish(DomainSpec d, int density = 512) {
  validate_domain(d, density);
  return d;
}

}  // namespace

DomainSpec make_disk(double radius, Cd z0) {
  if (radius <= 0) throw ValidationError("disk radius must be positive");
  DomainSpec d;
  d.gallery = "disk";
  CircularArc c;
  c.center = C212(Float212(0), Float212(0));
  c.radius = Float212(radius);
  c.ang0 = 0;
  c.ang1 = 2 * pi212();
  d.arcs.push_back({c, {}, {}});
  d.z0 = z0;
  d.symmetric_real_axis = z0.imag() == 0;
  return finish(std::move(d));
}

DomainSpec make_ellipse(double a, double b, Cd z0) {
  if (a <= 0 || b <= 0) throw ValidationError("ellipse semi-axes must be positive");
  DomainSpec d;
  d.gallery = "ellipse";
  SeriesArc s;
  s.kmin = -1;
  s.coeffs = {C212(Float212(a - b) / 2, Float212(0)), C212(Float212(0), Float212(0)),
              C212(Float212(a + b) / 2, Float212(0))};
  s.u0 = 0;
  s.u1 = 1;
  d.arcs.push_back({s, {}, {}});
  d.z0 = z0;
  d.symmetric_real_axis = z0.imag() == 0;
  return finish(std::move(d));
}

DomainSpec make_square(double h, Cd z0) {
  if (h <= 0) throw ValidationError("square half-side must be positive");
  DomainSpec d;
  d.gallery = "square";
  const Float212 H(h);
  auto seg = [](C212 a, C212 b) {
    SegmentArc s;
    s.p0 = a;
    s.p1 = b;
    return ArcSpec{s, {}, {}};
  };
  const C212 pp(H, H), mp(-H, H), mm(-H, -H), pm(H, -H);
  d.arcs = {seg(pm, pp), seg(pp, mp), seg(mp, mm), seg(mm, pm)};
  for (Cd v : {Cd(h, h), Cd(-h, h), Cd(-h, -h), Cd(h, -h)})
    d.corners.push_back({v, 0.5});
  d.z0 = z0;
  d.symmetric_real_axis = z0.imag() == 0;
  return finish(std::move(d));
}

DomainSpec make_lune(Cd z0) {
  DomainSpec d;
  d.gallery = "lune";
  const Float212 pi = pi212();
  CircularArc outer;  // |z-1| = 1, full turn starting and ending at the cusp 0
  outer.center = C212(Float212(1), Float212(0));
  outer.radius = 1;
  outer.ang0 = pi;
  outer.ang1 = 3 * pi;
  CircularArc inner;  // |z-1/2| = 1/2, traversed clockwise
  inner.center = C212(Float212(1) / 2, Float212(0));
  inner.radius = Float212(1) / 2;
  inner.ang0 = pi;
  inner.ang1 = -pi;
  d.arcs = {{outer, {}, {}}, {inner, {}, {}}};
  // x^2-type zero angle at 0; both horns hug the imaginary axis. The
  // annotation frame points along the upper horn.
  CuspAnnotation cusp;
  cusp.vertex = {0, 0};
  cusp.rot = M_PI / 2;
  cusp.p = 2;
  cusp.P = 2;
  cusp.c1 = 0.45;
  cusp.c2 = 1.5;
  cusp.x_check = 0.35;
  d.cusps = {cusp};
  d.z0 = z0;
  d.symmetric_real_axis = z0.imag() == 0;
  return finish(std::move(d));
}

DomainSpec make_drop(Cd z0) {
  // Inversion of the half-strip {Re u > 1, |Im u| < 1/2} shifted to put the
  // base point at the origin: three circular arcs, one x^2-type cusp at
  // -1/2, and two right-angle corners where the conformal map stays
  // analytic (the half-strip corners unfold under cos).
  DomainSpec d;
  d.gallery = "drop";
  const Float212 half(0.5);
  const C212 up_center(-half, Float212(1));
  const C212 low_center(-half, Float212(-1));
  const Float212 ang_c = mp::atan2(Float212(-0.6), Float212(0.8));
  const Float212 pi = pi212();
  CircularArc low;  // cusp -> lower corner (3/10, -2/5)
  low.center = low_center;
  low.radius = 1;
  low.ang0 = pi / 2;
  low.ang1 = -ang_c;  // = atan2(0.6, 0.8)
  CircularArc right;  // lower corner -> upper corner through (1/2, 0)
  right.center = C212(Float212(0), Float212(0));
  right.radius = half;
  right.ang0 = mp::atan2(Float212(-0.4), Float212(0.3));
  right.ang1 = mp::atan2(Float212(0.4), Float212(0.3));
  CircularArc up;  // upper corner -> cusp
  up.center = up_center;
  up.radius = 1;
  up.ang0 = ang_c;
  up.ang1 = -pi / 2;
  d.arcs = {{low, {}, {}}, {right, {}, {}}, {up, {}, {}}};
  d.corners = {{Cd(0.3, -0.4), 0.5}, {Cd(0.3, 0.4), 0.5}};
  CuspAnnotation cusp;
  cusp.vertex = {-0.5, 0};
  cusp.rot = 0;  // horn opens along +x
  cusp.p = 2;
  cusp.P = 2;
  cusp.c1 = 0.45;
  cusp.c2 = 0.6;
  cusp.x_check = 0.3;
  d.cusps = {cusp};
  d.z0 = z0;
  d.symmetric_real_axis = z0.imag() == 0;
  d.xi = 0.5;
  return finish(std::move(d));
}

namespace {

struct LensGeometry {
  Float212 theta0;     // half interior angle
  C212 upper_center, lower_center;
  Float212 rho;
  Float212 b_ang_up;   // angle of the right vertex on the upper circle
  Float212 a_ang_up;   // angle of the left vertex on the upper circle
};

LensGeometry lens_geometry(double xi, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw ValidationError("lens angle factor must be in (0,1)");
  if (!(xi > -1)) throw ValidationError("lens vertices must satisfy xi > -1");
  LensGeometry g;
  const Float212 pi = pi212();
  g.theta0 = Float212(alpha) * pi / 2;
  const Float212 h = (Float212(xi) + 1) / 2;
  const Float212 m = (Float212(xi) - 1) / 2;
  const Float212 cot = mp::cos(g.theta0) / mp::sin(g.theta0);
  g.rho = h / mp::sin(g.theta0);
  g.upper_center = C212(m, -h * cot);
  g.lower_center = C212(m, h * cot);
  g.b_ang_up = pi / 2 - g.theta0;
  g.a_ang_up = pi / 2 + g.theta0;
  return g;
}

}  // namespace

DomainSpec make_lens(double xi, double alpha, Cd z0) {
  DomainSpec d;
  d.gallery = "lens";
  const LensGeometry g = lens_geometry(xi, alpha);
  const Float212 pi = pi212();
  CircularArc lower;  // -1 -> xi below the axis
  lower.center = g.lower_center;
  lower.radius = g.rho;
  lower.ang0 = -(pi / 2 + g.theta0);
  lower.ang1 = -(pi / 2 - g.theta0);
  CircularArc upper;  // xi -> -1 above the axis
  upper.center = g.upper_center;
  upper.radius = g.rho;
  upper.ang0 = pi / 2 - g.theta0;
  upper.ang1 = pi / 2 + g.theta0;
  d.arcs = {{lower, {}, {}}, {upper, {}, {}}};
  d.corners = {{Cd(-1, 0), alpha}, {Cd(xi, 0), alpha}};
  d.z0 = z0;
  d.symmetric_real_axis = z0.imag() == 0;
  d.xi = xi;
  return finish(std::move(d));
}

DomainSpec make_psi_image(const std::vector<Cd>& psi_coeffs) {
  if (psi_coeffs.size() < 2 || psi_coeffs[1].imag() != 0 || psi_coeffs[1].real() <= 0)
    throw ValidationError("psi coefficients must have real positive psi'(0)");
  DomainSpec d;
  d.gallery = "psi_image";
  SeriesArc s;
  s.kmin = 0;
  for (Cd c : psi_coeffs) s.coeffs.push_back(C212(Float212(c.real()), Float212(c.imag())));
  s.u0 = 0;
  s.u1 = 1;
  d.arcs.push_back({s, {}, {}});
  d.z0 = psi_coeffs[0];
  bool real_coeffs = true;
  for (Cd c : psi_coeffs) real_coeffs = real_coeffs && c.imag() == 0;
  d.symmetric_real_axis = real_coeffs;
  return finish(std::move(d), 1024);
}

DomainSpec make_lens_spike(double xi, double alpha, double xi2, const Float212& delta,
                           Cd z0) {
  if (!(xi2 > xi)) throw ValidationError("spike vertex must satisfy xi2 > xi");
  if (!(delta > 0)) throw ValidationError("spike half-width must be positive");
  DomainSpec d;
  d.gallery = "lens_spike";
  const LensGeometry g = lens_geometry(xi, alpha);
  const Float212 pi = pi212();
  // cut the upper arc where Im z = delta
  const Float212 sin_cut = (delta - g.upper_center.im) / g.rho;
  if (!(sin_cut < 1))
    throw ValidationError("spike half-width too large for the lens arc");
  const Float212 ang_cut = mp::asin(sin_cut);
  if (!(ang_cut > g.b_ang_up && ang_cut < g.a_ang_up))
    throw ValidationError("spike cut parameter left the upper arc");
  const C212 z_cut(g.upper_center.re + g.rho * mp::cos(ang_cut),
                   g.upper_center.im + g.rho * mp::sin(ang_cut));
  const C212 z_cut_conj(z_cut.re, -z_cut.im);
  const C212 tip(Float212(xi2), Float212(0));

  CircularArc lower;  // -1 -> conj(z_cut)
  lower.center = g.lower_center;
  lower.radius = g.rho;
  lower.ang0 = -(pi / 2 + g.theta0);
  lower.ang1 = -ang_cut;
  SegmentArc s1;  // conj(z_cut) -> tip
  s1.p0 = z_cut_conj;
  s1.p1 = tip;
  SegmentArc s2;  // tip -> z_cut
  s2.p0 = tip;
  s2.p1 = z_cut;
  CircularArc upper;  // z_cut -> -1
  upper.center = g.upper_center;
  upper.radius = g.rho;
  upper.ang0 = ang_cut;
  upper.ang1 = pi / 2 + g.theta0;
  d.arcs = {{lower, {}, {}}, {s1, {}, {}}, {s2, {}, {}}, {upper, {}, {}}};

  const Cd zc(static_cast<double>(z_cut.re), static_cast<double>(z_cut.im));
  const double tip_half = std::atan2(static_cast<double>(delta),
                                     xi2 - static_cast<double>(z_cut.re));
  d.corners = {{Cd(-1, 0), alpha}, {Cd(xi2, 0), 2 * tip_half / M_PI}};
  d.z0 = z0;
  d.symmetric_real_axis = z0.imag() == 0;
  d.xi = xi2;
  DomainSpec out = finish(std::move(d));
  // the kinks where the spike meets the arcs are genuine corners; annotate
  // them after validation so the self-intersection test does not skip the
  // spike segments themselves
  out.corners.push_back({zc, junction_angle(out, 2)});
  out.corners.push_back({std::conj(zc), junction_angle(out, 0)});
  out.id_hash = hex64(fnv1a(domain_canonical_text(out)));
  return out;
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

Cd parse_cd(const json& j) {
  if (j.is_number()) return Cd(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return Cd(j[0].get<double>(), j[1].get<double>());
  throw ValidationError("expected a number or [re, im] pair");
}

C212 parse_c212(const json& j) {
  const Cd z = parse_cd(j);
  return C212(Float212(z.real()), Float212(z.imag()));
}

ArcSpec parse_arc(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "segment") {
    SegmentArc s;
    s.p0 = parse_c212(j.at("p0"));
    s.p1 = parse_c212(j.at("p1"));
    return {s, {}, {}};
  }
  if (kind == "circular") {
    CircularArc c;
    c.center = parse_c212(j.at("center"));
    c.radius = Float212(j.at("radius").get<double>());
    c.ang0 = Float212(j.at("ang0").get<double>());
    c.ang1 = Float212(j.at("ang1").get<double>());
    return {c, {}, {}};
  }
  if (kind == "power_cusp") {
    PowerCuspArc p;
    p.vertex = parse_c212(j.at("vertex"));
    p.rot = Float212(j.value("rot", 0.0));
    p.coef = Float212(j.at("c").get<double>());
    p.expo = Float212(j.at("p").get<double>());
    p.x_from = Float212(j.at("x_from").get<double>());
    p.x_to = Float212(j.at("x_to").get<double>());
    p.lower = j.value("lower", false);
    return {p, {}, {}};
  }
  if (kind == "series") {
    SeriesArc s;
    s.kmin = j.value("kmin", 0);
    for (const auto& c : j.at("coeffs")) s.coeffs.push_back(parse_c212(c));
    s.u0 = Float212(j.value("u0", 0.0));
    s.u1 = Float212(j.value("u1", 1.0));
    return {s, {}, {}};
  }
  throw ValidationError("unknown arc kind '" + kind + "'");
}

}  // namespace

DomainSpec build_domain(const std::string& config_text) {
  json j;
  try {
    j = json::parse(config_text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("malformed domain config: ") + e.what());
  }
  if (j.contains("gallery")) {
    const std::string g = j["gallery"].get<std::string>();
    if (g == "disk")
      return make_disk(j.value("radius", 1.0), j.contains("z0") ? parse_cd(j["z0"]) : Cd(0, 0));
    if (g == "ellipse")
      return make_ellipse(j.value("a", 1.0), j.value("b", 0.5),
                          j.contains("z0") ? parse_cd(j["z0"]) : Cd(0, 0));
    if (g == "square")
      return make_square(j.value("half", 1.0),
                         j.contains("z0") ? parse_cd(j["z0"]) : Cd(0, 0));
    if (g == "lune")
      return make_lune(j.contains("z0") ? parse_cd(j["z0"]) : Cd(1.4, 0.0));
    if (g == "drop")
      return make_drop(j.contains("z0") ? parse_cd(j["z0"]) : Cd(0, 0));
    if (g == "lens")
      return make_lens(j.value("xi", 0.6), j.value("alpha", M_SQRT1_2),
                       j.contains("z0") ? parse_cd(j["z0"]) : Cd(0, 0));
    if (g == "psi_image") {
      std::vector<Cd> coeffs;
      for (const auto& c : j.at("coeffs")) coeffs.push_back(parse_cd(c));
      return make_psi_image(coeffs);
    }
    if (g == "lens_spike")
      return make_lens_spike(j.value("xi", 0.6), j.value("alpha", M_SQRT1_2),
                             j.at("xi2").get<double>(),
                             Float212(j.value("delta", 1e-13)),
                             j.contains("z0") ? parse_cd(j["z0"]) : Cd(0, 0));
    throw ValidationError("unknown gallery domain '" + g + "'");
  }
  if (!j.contains("arcs")) throw ValidationError("config needs 'gallery' or 'arcs'");
  DomainSpec d;
  d.gallery = "custom";
  for (const auto& a : j["arcs"]) d.arcs.push_back(parse_arc(a));
  d.z0 = j.contains("z0") ? parse_cd(j["z0"]) : Cd(0, 0);
  d.symmetric_real_axis = j.value("symmetric_real_axis", false);
  if (j.contains("xi")) d.xi = j["xi"].get<double>();
  for (const auto& c : j.value("cusps", json::array())) {
    CuspAnnotation cu;
    cu.vertex = parse_cd(c.at("vertex"));
    cu.rot = c.value("rot", 0.0);
    cu.p = c.at("p").get<double>();
    cu.P = c.value("P", cu.p);
    cu.c1 = c.at("c1").get<double>();
    cu.c2 = c.at("c2").get<double>();
    cu.x_check = c.value("x_check", 0.1);
    d.cusps.push_back(cu);
  }
  for (const auto& c : j.value("corners", json::array()))
    d.corners.push_back({parse_cd(c.at("vertex")), c.at("alpha").get<double>()});
  return finish(std::move(d), j.value("sample_density", 512));
}

DomainSpec build_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open domain config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return build_domain(ss.str());
}

}  // namespace bkm
