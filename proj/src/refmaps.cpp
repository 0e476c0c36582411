#include "bkm/refmaps.hpp"

#include <algorithm>
#include <cmath>

namespace bkm {

namespace {

// tan(v/2) mapped stably: for Im v < 0 use Q = e^{-iv}, otherwise q = e^{iv};
// both have modulus <= 1 on their side so nothing overflows however deep into
// a horn v goes.
struct TanHalf {
  Cd value;  // D = tan(v/2)
  Cd factor; // E = dD/dv = (1 + D^2)/2 in a cancellation-free form
};

TanHalf tan_half(Cd v) {
  TanHalf t;
  if (v.imag() < 0) {
    const Cd Q = std::exp(Cd(0, -1) * v);
    t.value = Cd(0, -1) * (1.0 - Q) / (1.0 + Q);
    t.factor = 2.0 * Q / ((1.0 + Q) * (1.0 + Q));
  } else {
    const Cd q = std::exp(Cd(0, 1) * v);
    t.value = Cd(0, 1) * (1.0 - q) / (1.0 + q);
    t.factor = 2.0 * q / ((1.0 + q) * (1.0 + q));
  }
  return t;
}

Cd lune_v(Cd z) { return 2.0 * M_PI / z - 1.5 * M_PI; }

}  // namespace

double green_disk_exterior(double x) {
  if (!(x > 1)) throw ValidationError("green_disk_exterior needs x > 1");
  return std::log(x);
}

ReferenceMap ReferenceMap::disk_map(double radius, Cd z0) {
  if (!(std::abs(z0) < radius)) throw ValidationError("z0 must lie inside the disk");
  ReferenceMap m;
  m.kind_ = Kind::DiskMobius;
  m.radius_ = radius;
  m.z0_ = z0;
  m.r0_ = (radius * radius - std::norm(z0)) / radius;
  m.boundary_.resize(512);
  for (int i = 0; i < 512; ++i) m.boundary_[i] = std::polar(radius, 2 * M_PI * i / 512);
  return m;
}

ReferenceMap ReferenceMap::psi_image_map(const std::vector<Cd>& psi) {
  if (psi.size() < 2 || psi[1].imag() != 0 || psi[1].real() <= 0)
    throw ValidationError("psi'(0) must be real and positive");
  ReferenceMap m;
  m.kind_ = Kind::PsiImage;
  m.psi_ = psi;
  m.z0_ = psi[0];
  m.r0_ = psi[1].real();

  // injectivity certificate: psi(unit circle) must not self-intersect
  const int ns = 4096;
  m.boundary_.resize(ns);
  for (int i = 0; i < ns; ++i) m.boundary_[i] = m.psi_eval(std::polar(1.0, 2 * M_PI * i / ns));
  auto orient = [](Cd a, Cd b, Cd c) {
    const double v = (b.real() - a.real()) * (c.imag() - a.imag()) -
                     (b.imag() - a.imag()) * (c.real() - a.real());
    return (v > 0) - (v < 0);
  };
  for (int i = 0; i < ns; ++i) {
    const Cd a = m.boundary_[i], b = m.boundary_[(i + 1) % ns];
    for (int j = i + 2; j < ns; ++j) {
      if (i == 0 && j == ns - 1) continue;
      const Cd c = m.boundary_[j], d = m.boundary_[(j + 1) % ns];
      const int o1 = orient(a, b, c), o2 = orient(a, b, d);
      if (o1 == o2) continue;
      const int o3 = orient(c, d, a), o4 = orient(c, d, b);
      if (o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0)
        throw ValidationError("psi is not injective on the boundary sample");
    }
  }

  // Newton seeds
  const int g = 64;
  m.grid_w_.reserve(size_t(g) * g);
  m.grid_z_.reserve(size_t(g) * g);
  for (int i = 0; i < g; ++i) {
    const double r = (i + 0.5) / g;
    for (int j = 0; j < g; ++j) {
      const Cd w = std::polar(r, 2 * M_PI * j / g);
      m.grid_w_.push_back(w);
      m.grid_z_.push_back(m.psi_eval(w));
    }
  }
  return m;
}

ReferenceMap ReferenceMap::lune_map(Cd z0) {
  ReferenceMap m;
  m.kind_ = Kind::Lune;
  m.z0_ = z0;
  if (z0.imag() != 0)
    throw ValidationError("lune reference map expects a real base point");
  const double x = z0.real();
  if (!(x > 1 && x < 2))
    throw ValidationError("lune base point must lie in (1,2) on the real axis");
  const Cd d0 = tan_half(lune_v(z0)).value;
  m.zeta0_ = d0.real();
  // chain = m'(zeta0) * E(zeta0) * v'(z0)
  const double e0 = tan_half(lune_v(z0)).factor.real();
  const double vprime = -2.0 * M_PI / (x * x);
  const double chain = 1.0 / (1.0 - m.zeta0_ * m.zeta0_) * e0 * vprime;
  m.rho_ = 1.0 / chain;
  m.r0_ = std::abs(m.rho_);
  const int ns = 1024;
  m.boundary_.resize(ns);
  for (int i = 0; i < ns / 2; ++i) {
    m.boundary_[i] = 1.0 + std::polar(1.0, M_PI + 2 * M_PI * (i + 0.5) / (ns / 2));
    m.boundary_[ns / 2 + i] =
        0.5 + std::polar(0.5, M_PI - 2 * M_PI * (i + 0.5) / (ns / 2));
  }
  return m;
}

ReferenceMap ReferenceMap::lens_map(double xi, double alpha, Cd z0) {
  if (!(alpha > 0 && alpha < 1)) throw ValidationError("lens angle factor must be in (0,1)");
  ReferenceMap m;
  m.kind_ = Kind::Lens;
  m.xi_ = xi;
  m.alpha_ = alpha;
  m.z0_ = z0;
  if (z0.imag() != 0 || !(z0.real() > -1 && z0.real() < xi))
    throw ValidationError("lens base point must be real inside (-1, xi)");
  const double w0 = (1 + z0.real()) / (xi - z0.real());
  m.s0_ = std::pow(w0, 1.0 / alpha);
  const double tprime0 = (1 + xi) / ((xi - z0.real()) * (xi - z0.real()));
  const double sprime0 = (1.0 / alpha) * std::pow(w0, 1.0 / alpha - 1.0) * tprime0;
  m.rho_ = 2.0 * m.s0_ / sprime0;
  m.r0_ = m.rho_;
  // boundary: two circular arcs through -1 and xi with half-angle alpha*pi/2
  const double th0 = alpha * M_PI / 2;
  const double h = (xi + 1) / 2, mid = (xi - 1) / 2;
  const double rho = h / std::sin(th0), cy = h / std::tan(th0);
  const int ns = 1024;
  m.boundary_.resize(ns);
  for (int i = 0; i < ns / 2; ++i) {
    const double a = (M_PI / 2 - th0) + 2 * th0 * (i + 0.5) / (ns / 2);
    m.boundary_[i] = Cd(mid, -cy) + std::polar(rho, a);
    m.boundary_[ns / 2 + i] = Cd(mid, cy) + std::polar(rho, -a);
  }
  return m;
}

ReferenceMap ReferenceMap::drop_map(Cd z0) {
  ReferenceMap m;
  m.kind_ = Kind::Drop;
  m.z0_ = z0;
  if (z0.imag() != 0 || !(z0.real() > -0.5 && z0.real() < 0.5))
    throw ValidationError("drop base point must be real inside (-1/2, 1/2)");
  const double u0 = 1.0 / (z0.real() + 0.5);
  const double beta = M_PI * (u0 - 1.0);  // zeta0 = i*sinh(beta)
  m.drop_y0_ = std::sinh(beta);
  // chain rule at z0: phi'(z0) = rho * m'(zeta0) * zeta'(z0)
  const double chain = -M_PI * std::cosh(beta) /
                       (2.0 * std::sinh(beta) * std::pow(z0.real() + 0.5, 2));
  m.rho_ = 1.0 / chain;
  m.r0_ = std::abs(m.rho_);
  const int ns = 1024;
  m.boundary_.resize(ns);
  const double angc = std::atan2(0.6, 0.8);
  for (int i = 0; i < ns / 4; ++i) {
    const double f = (i + 0.5) / (ns / 4);
    const double a_low = M_PI / 2 + (angc - M_PI / 2) * f;
    m.boundary_[i] = Cd(-0.5, -1) + std::polar(1.0, a_low);
    const double a_right = -std::atan2(0.4, 0.3) + 2 * std::atan2(0.4, 0.3) * f;
    m.boundary_[ns / 4 + i] = std::polar(0.5, a_right);
    const double a_up = -angc + (-M_PI / 2 + angc) * f;
    m.boundary_[ns / 2 + i] = Cd(-0.5, 1) + std::polar(1.0, a_up);
    m.boundary_[3 * ns / 4 + i] = std::conj(m.boundary_[i]);
  }
  return m;
}

// s = pi*(1/2 - i*(1/(z+1/2) - 1)); zeta = cos(s) maps the drop onto the
// upper half plane. Deep in the horn Im s -> -infinity and zeta blows up, so
// evaluation switches to reciprocal forms there.
Cd ReferenceMap::drop_zeta(Cd z, bool* deep) const {
  const Cd u = 1.0 / (z + 0.5);
  const Cd s = M_PI * (Cd(0.5, 0) - Cd(0, 1) * (u - 1.0));
  if (deep) *deep = s.imag() < -300.0;
  return std::cos(s);
}

namespace {

Cd drop_s(Cd z) {
  const Cd u = 1.0 / (z + 0.5);
  return M_PI * (Cd(0.5, 0) - Cd(0, 1) * (u - 1.0));
}

}  // namespace

Cd ReferenceMap::psi_eval(Cd w) const {
  Cd acc = 0;
  for (size_t j = psi_.size(); j-- > 0;) acc = acc * w + psi_[j];
  return acc;
}

Cd ReferenceMap::psi_inverse(Cd z) const {
  size_t best = 0;
  double bd = 1e300;
  for (size_t i = 0; i < grid_z_.size(); ++i) {
    const double d = std::abs(grid_z_[i] - z);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  Cd w = grid_w_[best];
  for (int it = 0; it < 100; ++it) {
    Cd f = -z, df = 0;
    for (size_t j = psi_.size(); j-- > 1;) {
      f = f * w + psi_[j];
      df = df * w + double(j) * psi_[j];
    }
    f = f * w + psi_[0];
    const Cd step = f / df;
    w -= step;
    if (std::abs(step) < 1e-15 * (1 + std::abs(w))) return w;
  }
  throw NumericalError("psi inverse Newton iteration did not converge");
}

Cd ReferenceMap::phi(Cd z) const {
  switch (kind_) {
    case Kind::DiskMobius: {
      const Cd w = z / radius_, w0 = z0_ / radius_;
      return r0_ * (w - w0) / (1.0 - std::conj(w0) * w);
    }
    case Kind::PsiImage:
      return r0_ * psi_inverse(z);
    case Kind::Lune: {
      const Cd d = tan_half(lune_v(z)).value;
      return rho_ * (d - zeta0_) / (1.0 - zeta0_ * d);
    }
    case Kind::Lens: {
      const Cd w = (1.0 + z) / (xi_ - z);
      const Cd s = std::pow(w, 1.0 / alpha_);
      return rho_ * (s - s0_) / (s + s0_);
    }
    case Kind::Drop: {
      const Cd s = drop_s(z);
      const Cd zeta0(0, drop_y0_);
      if (s.imag() < -300.0) {
        const Cd Q = std::exp(Cd(0, -1) * s);
        const Cd xi = 2.0 * Q / (1.0 + Q * Q);  // 1/cos(s)
        return rho_ * (1.0 - zeta0 * xi) / (1.0 - std::conj(zeta0) * xi);
      }
      const Cd zeta = std::cos(s);
      return rho_ * (zeta - zeta0) / (zeta - std::conj(zeta0));
    }
  }
  return {};
}

Cd ReferenceMap::dphi(Cd z) const {
  switch (kind_) {
    case Kind::DiskMobius: {
      const Cd w0 = z0_ / radius_;
      const Cd den = 1.0 - std::conj(w0) * z / radius_;
      return r0_ * (1.0 - std::norm(w0)) / (radius_ * den * den);
    }
    case Kind::PsiImage: {
      const Cd w = psi_inverse(z);
      Cd dpsi = 0;
      for (size_t j = psi_.size(); j-- > 1;) dpsi = dpsi * w + double(j) * psi_[j];
      return r0_ / dpsi;
    }
    case Kind::Lune:
      return lune_derivative_exact(1, z);
    case Kind::Lens: {
      const Cd w = (1.0 + z) / (xi_ - z);
      const Cd s = std::pow(w, 1.0 / alpha_);
      const Cd tp = (1.0 + xi_) / ((xi_ - z) * (xi_ - z));
      const Cd sp = (1.0 / alpha_) * std::pow(w, 1.0 / alpha_ - 1.0) * tp;
      const Cd den = s + s0_;
      return rho_ * (2.0 * s0_ / (den * den)) * sp;
    }
    case Kind::Drop: {
      const Cd s = drop_s(z);
      const Cd zeta0(0, drop_y0_);
      const Cd zc2 = (z + 0.5) * (z + 0.5);
      const Cd pref = rho_ * (zeta0 - std::conj(zeta0)) * Cd(0, -M_PI) / zc2;
      if (s.imag() < -300.0) {
        const Cd Q = std::exp(Cd(0, -1) * s);
        const Cd Q2 = Q * Q;  // e^{-2is}
        const Cd xi = 2.0 * Q / (1.0 + Q2);
        const Cd tan_s = Cd(0, -1) * (1.0 - Q2) / (1.0 + Q2);
        const Cd den = 1.0 - std::conj(zeta0) * xi;
        return pref * tan_s * xi / (den * den);
      }
      const Cd zeta = std::cos(s);
      const Cd den = zeta - std::conj(zeta0);
      return pref * std::sin(s) / (den * den);
    }
  }
  return {};
}

Cd ReferenceMap::lune_derivative_exact(int k, Cd z) const {
  if (kind_ != Kind::Lune) throw ValidationError("exact chain derivatives exist for the lune only");
  if (k < 1 || k > 3) throw ValidationError("exact lune derivative supports k in {1,2,3}");
  const Cd v = lune_v(z);
  const TanHalf t = tan_half(v);
  const Cd D = t.value, E = t.factor;
  const Cd vp = -2.0 * M_PI / (z * z);
  const Cd vpp = 4.0 * M_PI / (z * z * z);
  const Cd vppp = -12.0 * M_PI / (z * z * z * z);
  const Cd Dz = E * vp;
  const Cd Dzz = D * E * vp * vp + E * vpp;
  const Cd Dzzz = (E + D * D) * E * vp * vp * vp + 3.0 * D * E * vp * vpp + E * vppp;
  const Cd den = 1.0 - zeta0_ * D;
  const Cd m1 = (1.0 - zeta0_ * zeta0_) / (den * den);
  if (k == 1) return rho_ * m1 * Dz;
  const Cd m2 = 2.0 * zeta0_ * (1.0 - zeta0_ * zeta0_) / (den * den * den);
  if (k == 2) return rho_ * (m2 * Dz * Dz + m1 * Dzz);
  const Cd m3 = 6.0 * zeta0_ * zeta0_ * (1.0 - zeta0_ * zeta0_) / (den * den * den * den);
  return rho_ * (m3 * Dz * Dz * Dz + 3.0 * m2 * Dz * Dzz + m1 * Dzzz);
}

Cd ReferenceMap::cusp_vertex() const {
  if (kind_ == Kind::Lune) return {0, 0};
  if (kind_ == Kind::Drop) return {-0.5, 0};
  throw ValidationError("this reference map has no cusp");
}

Cd ReferenceMap::cusp_image(int horn) const {
  if (kind_ == Kind::Drop) return {rho_, 0};
  if (kind_ != Kind::Lune) throw ValidationError("this reference map has no cusp");
  const Cd zc = horn >= 0 ? Cd(0, -1) : Cd(0, 1);
  return rho_ * (zc - zeta0_) / (1.0 - zeta0_ * zc);
}

Cd ReferenceMap::approach(double s, int horn) const {
  if (kind_ == Kind::Drop) {
    // straight ray into the domain along the real axis
    if (!(s > 0 && s < 0.999)) throw ValidationError("approach distance out of range");
    return {-0.5 + s, 0};
  }
  if (kind_ != Kind::Lune) throw ValidationError("this reference map has no cusp");
  if (!(s > 0 && s < 0.45)) throw ValidationError("approach height must lie in (0, 0.45)");
  const double x_outer = 1.0 - std::sqrt(1.0 - s * s);
  const double x_inner = 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * s * s));
  const double x = 0.5 * (x_outer + x_inner);
  return {x, horn >= 0 ? s : -s};
}

double ReferenceMap::log_abs_phi_minus_cusp(Cd t, int horn) const {
  if (kind_ == Kind::Drop) {
    // |phi - rho| = R0 * 2*y0 / |zeta - conj(zeta0)|
    const Cd s = drop_s(t);
    const double head = std::log(r0_) + std::log(2.0 * drop_y0_);
    if (s.imag() < -300.0) {
      const Cd Q = std::exp(Cd(0, -1) * s);
      const Cd Q2 = Q * Q;
      const Cd xi = 2.0 * Q / (1.0 + Q2);
      // log|zeta| = -Im s - log 2 + log|1 + Q^2|
      const double log_zeta = -s.imag() - std::log(2.0) + std::log(std::abs(1.0 + Q2));
      return head - log_zeta - std::log(std::abs(1.0 - Cd(0, -drop_y0_) * xi));
    }
    const Cd zeta = std::cos(s);
    return head - std::log(std::abs(zeta - Cd(0, -drop_y0_)));
  }
  if (kind_ != Kind::Lune) throw ValidationError("this reference map has no cusp");
  const Cd v = lune_v(t);
  const double zc_sign = horn >= 0 ? -1.0 : 1.0;  // cusp prime end at zc = sign*i
  const Cd zc(0, zc_sign);
  // |phi - phi_c| = |rho| (1 - zeta0^2) |D - zc| / (|1 - zeta0 D| |1 - zeta0 zc|)
  double log_d_minus_zc;
  Cd D;
  if (horn >= 0 && v.imag() < -1) {
    const Cd Q = std::exp(Cd(0, -1) * v);
    D = Cd(0, -1) * (1.0 - Q) / (1.0 + Q);
    // D + i = 2iQ/(1+Q)
    log_d_minus_zc = std::log(2.0) + v.imag() - std::log(std::abs(1.0 + Q));
  } else if (horn < 0 && v.imag() > 1) {
    const Cd q = std::exp(Cd(0, 1) * v);
    D = Cd(0, 1) * (1.0 - q) / (1.0 + q);
    // D - i = -2iq/(1+q)
    log_d_minus_zc = std::log(2.0) - v.imag() - std::log(std::abs(1.0 + q));
  } else {
    D = tan_half(v).value;
    log_d_minus_zc = std::log(std::abs(D - zc));
  }
  return std::log(r0_) + std::log1p(-zeta0_ * zeta0_) + log_d_minus_zc -
         std::log(std::abs(1.0 - zeta0_ * D)) - 0.5 * std::log1p(zeta0_ * zeta0_);
}

double ReferenceMap::boundary_distance(Cd z) const {
  double d = 1e300;
  for (const Cd& b : boundary_) d = std::min(d, std::abs(z - b));
  return d;
}

Cd ReferenceMap::derivative_k(int k, Cd z) const {
  if (k < 0) throw ValidationError("derivative order must be >= 0");
  if (k == 0) return phi(z);
  const double dist = boundary_distance(z);
  const double r = std::min(1e-2, dist / 2);
  if (!(r > 1e-12))
    throw ValidationError("point too close to the boundary for the Cauchy radius");
  const int nq = 256;
  Cd acc = 0;
  for (int j = 0; j < nq; ++j) {
    const double th = 2 * M_PI * j / nq;
    acc += phi(z + std::polar(r, th)) * std::polar(1.0, -k * th);
  }
  double kfac = 1;
  for (int i = 2; i <= k; ++i) kfac *= i;
  return acc * kfac / (double(nq) * std::pow(r, k));
}

}  // namespace bkm
