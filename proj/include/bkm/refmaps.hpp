#pragma once

#include <memory>
#include <vector>

#include "bkm/complex.hpp"
#include "bkm/errors.hpp"

namespace bkm {

// Exact normalized conformal maps phi with phi(z0) = 0, phi'(z0) = 1 for the
// validation domains, plus the exact inner conformal radius R0.
class ReferenceMap {
 public:
  enum class Kind { DiskMobius, PsiImage, Lune, Lens, Drop };

  Kind kind() const { return kind_; }
  Cd z0() const { return z0_; }
  double R0() const { return r0_; }

  Cd phi(Cd z) const;
  Cd dphi(Cd z) const;  // exact first derivative by the chain rule

  // k-th derivative by a Cauchy integral over a circle of radius
  // min(1e-2, dist(z, boundary)/2), trapezoid rule with 256 nodes.
  Cd derivative_k(int k, Cd z) const;

  // Cusp support (lune only). horn = +1 approaches through the upper horn,
  // -1 through the lower one.
  Cd cusp_vertex() const;
  Cd cusp_image(int horn = +1) const;
  // Point inside the horn at height s over the vertex (the exact mid-curve
  // between the two circles); |approach(s)| ~ s.
  Cd approach(double s, int horn = +1) const;
  // log |phi(t) - cusp_image|, stable arbitrarily deep into the horn.
  double log_abs_phi_minus_cusp(Cd t, int horn = +1) const;
  // Exact derivatives of the lune composition for k <= 3 (test oracle for
  // derivative_k).
  Cd lune_derivative_exact(int k, Cd z) const;

  double boundary_distance(Cd z) const;
  const std::vector<Cd>& boundary_sample() const { return boundary_; }

  static ReferenceMap disk_map(double radius, Cd z0);
  static ReferenceMap psi_image_map(const std::vector<Cd>& psi_coeffs);
  static ReferenceMap lune_map(Cd z0 = Cd(1.4, 0.0));
  static ReferenceMap lens_map(double xi, double alpha, Cd z0 = Cd(0, 0));
  // Map of the "drop" gallery domain: Mobius(cos(affine(1/(z + 1/2)))).
  // The cusp at -1/2 is approachable along the real ray into the domain.
  static ReferenceMap drop_map(Cd z0 = Cd(0, 0));

  // psi-image helpers
  Cd psi_eval(Cd w) const;
  Cd psi_inverse(Cd z) const;  // Newton from a grid-seeded start

 private:
  Kind kind_;
  Cd z0_;
  double r0_ = 1;
  std::vector<Cd> boundary_;

  // disk
  double radius_ = 1;
  // psi image
  std::vector<Cd> psi_;
  std::vector<Cd> grid_w_, grid_z_;
  // lune
  double zeta0_ = 0;  // image of z0 in the unit disk
  double rho_ = 1;    // phi = rho * mobius(D(z)); R0 = |rho|
  // lens
  double xi_ = 0.6, alpha_ = 0.7, s0_ = 1;
  // drop: zeta0 = i*drop_y0_ in the upper half plane
  double drop_y0_ = 1;
  Cd drop_zeta(Cd z, bool* deep = nullptr) const;
};

// Green function of the unit-disk exterior with pole at infinity: log x.
double green_disk_exterior(double x);

// Lens map evaluated at any working precision (used as an independent
// high-precision oracle in tests).
template <class R>
Cplx<R> lens_phi(const R& xi, const R& alpha, const Cplx<R>& z0, const Cplx<R>& z) {
  using C = Cplx<R>;
  const C one(R(1));
  const C w = (one + z) / (C(xi) - z);
  const C w0 = (one + z0) / (C(xi) - z0);
  const R inv_alpha = R(1) / alpha;
  const C s = cpow(w, inv_alpha);
  const C s0 = cpow(w0, inv_alpha);
  const C m = (s - s0) / (s + s0);
  // rho = 1 / (m'(s0) * s'(z0)) with m'(s0) = 1/(2 s0)
  const C tprime0 = (one + C(xi)) / ((C(xi) - z0) * (C(xi) - z0));
  const C sprime0 = C(inv_alpha) * cpow(w0, inv_alpha - R(1)) * tprime0;
  const C rho = C(R(2)) * s0 / sprime0;
  return rho * m;
}

}  // namespace bkm
