#pragma once

#include <cmath>
#include <complex>

#include "bkm/precision.hpp"

namespace bkm {

// Minimal complex value type usable with the extended-precision reals.
// std::complex is only specified for float/double/long double, so the
// multiprecision pipeline carries its own.
template <class R>
struct Cplx {
  R re{}, im{};

  Cplx() = default;
  Cplx(const R& r) : re(r) {}
  Cplx(const R& r, const R& i) : re(r), im(i) {}
  Cplx(int r) : re(r) {}

  template <class S>
  static Cplx from(const Cplx<S>& o) {
    return Cplx(R(o.re), R(o.im));
  }
  static Cplx from_std(const std::complex<double>& z) {
    return Cplx(R(z.real()), R(z.imag()));
  }
  std::complex<double> to_std() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  Cplx operator-() const { return {-re, -im}; }
  Cplx& operator+=(const Cplx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cplx& operator-=(const Cplx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Cplx& operator*=(const Cplx& o) {
    const R r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Cplx& operator*=(const R& s) {
    re *= s;
    im *= s;
    return *this;
  }
};

template <class R>
inline Cplx<R> operator+(Cplx<R> a, const Cplx<R>& b) { return a += b; }
template <class R>
inline Cplx<R> operator-(Cplx<R> a, const Cplx<R>& b) { return a -= b; }
template <class R>
inline Cplx<R> operator*(Cplx<R> a, const Cplx<R>& b) { return a *= b; }
template <class R>
inline Cplx<R> operator*(Cplx<R> a, const R& s) { return a *= s; }
template <class R>
inline Cplx<R> operator*(const R& s, Cplx<R> a) { return a *= s; }

template <class R>
inline Cplx<R> conj(const Cplx<R>& a) { return {a.re, -a.im}; }

template <class R>
inline R norm(const Cplx<R>& a) { return a.re * a.re + a.im * a.im; }

template <class R>
inline R abs(const Cplx<R>& a) {
  using std::sqrt;
  using boost::multiprecision::sqrt;
  return sqrt(norm(a));
}
inline double abs(const Cplx<double>& a) { return std::hypot(a.re, a.im); }

template <class R>
inline Cplx<R> operator/(const Cplx<R>& a, const Cplx<R>& b) {
  const R d = norm(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
template <class R>
inline Cplx<R> operator/(const Cplx<R>& a, const R& s) {
  return {a.re / s, a.im / s};
}

template <class R>
inline Cplx<R> cexp(const Cplx<R>& a) {
  using std::cos;
  using std::exp;
  using std::sin;
  using boost::multiprecision::cos;
  using boost::multiprecision::exp;
  using boost::multiprecision::sin;
  const R m = exp(a.re);
  return {m * cos(a.im), m * sin(a.im)};
}

template <class R>
inline Cplx<R> clog(const Cplx<R>& a) {
  using std::atan2;
  using std::log;
  using boost::multiprecision::atan2;
  using boost::multiprecision::log;
  return {log(abs(a)), atan2(a.im, a.re)};
}

template <class R>
inline Cplx<R> cpow(const Cplx<R>& a, const R& s) {
  return cexp(clog(a) * s);
}

template <class R>
inline Cplx<R> csqrt(const Cplx<R>& a) {
  return cpow(a, R(1) / R(2));
}

using Cd = std::complex<double>;

}  // namespace bkm
