#pragma once

// Kernel bodies shared by every ISA variant. Each variant instantiates them
// with its own packed type V, which must provide
//
//   static constexpr std::size_t width;
//   static V load(const double*);   void store(double*) const;
//   static V broadcast(double);
//   operator+, operator-, operator* (lane-wise), unary minus.
//
// Only +, - and * are used, in a fixed order, so a variant without fused
// multiply-add produces the same bits as the scalar reference.

#include <cstddef>

#include "nhf/simd/kernels.hpp"

namespace nhf::simd::detail {

template <class V>
struct CV {
  V re;
  V im;
};

template <class V>
inline CV<V> cadd(const CV<V>& a, const CV<V>& b) {
  return {a.re + b.re, a.im + b.im};
}

template <class V>
inline CV<V> cmul(const CV<V>& a, const CV<V>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

template <class V>
inline CV<V> cscale(const V& s, const CV<V>& a) {
  return {s * a.re, s * a.im};
}

template <class V>
inline CV<V> cneg(const CV<V>& a) {
  return {-a.re, -a.im};
}

/// Processes points [begin, end) in packs of V::width; end - begin must be a
/// multiple of the width.
template <class V>
void moebius_range(const Mat2& u, const MoebiusBatch& b, std::size_t begin, std::size_t end) {
  const CV<V> u00{V::broadcast(u.m00.real()), V::broadcast(u.m00.imag())};
  const CV<V> u01{V::broadcast(u.m01.real()), V::broadcast(u.m01.imag())};
  const CV<V> u10{V::broadcast(u.m10.real()), V::broadcast(u.m10.imag())};
  const CV<V> u11{V::broadcast(u.m11.real()), V::broadcast(u.m11.imag())};
  for (std::size_t i = begin; i < end; i += V::width) {
    const CV<V> p{V::load(&b.p.re[i]), V::load(&b.p.im[i])};
    const CV<V> den = cadd(u00, cmul(u01, p));
    const CV<V> num = cadd(u10, cmul(u11, p));
    den.re.store(&b.den.re[i]);
    den.im.store(&b.den.im[i]);
    num.re.store(&b.num.re[i]);
    num.im.store(&b.num.im[i]);
  }
}

template <class V>
struct HillState {
  CV<V> y;
  CV<V> v;
};

template <class V>
inline void rk4_step(HillState<V>& s, const V& h, const V& half_h, const V& sixth_h,
                     const CV<V>& p0, const CV<V>& pm, const CV<V>& p1) {
  const V two = V::broadcast(2.0);
  const CV<V> k1y = s.v;
  const CV<V> k1v = cneg(cmul(p0, s.y));
  const CV<V> y2 = cadd(s.y, cscale(half_h, k1y));
  const CV<V> v2 = cadd(s.v, cscale(half_h, k1v));
  const CV<V> k2y = v2;
  const CV<V> k2v = cneg(cmul(pm, y2));
  const CV<V> y3 = cadd(s.y, cscale(half_h, k2y));
  const CV<V> v3 = cadd(s.v, cscale(half_h, k2v));
  const CV<V> k3y = v3;
  const CV<V> k3v = cneg(cmul(pm, y3));
  const CV<V> y4 = cadd(s.y, cscale(h, k3y));
  const CV<V> v4 = cadd(s.v, cscale(h, k3v));
  const CV<V> k4y = v4;
  const CV<V> k4v = cneg(cmul(p1, y4));
  const CV<V> sy = cadd(cadd(k1y, cscale(two, k2y)), cadd(cscale(two, k3y), k4y));
  const CV<V> sv = cadd(cadd(k1v, cscale(two, k2v)), cadd(cscale(two, k3v), k4v));
  s.y = cadd(s.y, cscale(sixth_h, sy));
  s.v = cadd(s.v, cscale(sixth_h, sv));
}

/// Integrates lanes [begin, end) in packs of V::width.
template <class V>
void hill_rk4_range(const HillBatch& b, std::size_t begin, std::size_t end) {
  const std::size_t lanes = b.lanes;
  const std::size_t steps = b.step.size();
  const V zero = V::broadcast(0.0);
  const V one = V::broadcast(1.0);
  for (std::size_t l = begin; l < end; l += V::width) {
    HillState<V> a{{one, zero}, {zero, zero}};
    HillState<V> c{{zero, zero}, {one, zero}};
    auto coeff = [&](std::size_t node) {
      return CV<V>{V::load(&b.p_re[node * lanes + l]), V::load(&b.p_im[node * lanes + l])};
    };
    for (std::size_t j = 0; j < steps; ++j) {
      const double hj = b.step[j];
      const V h = V::broadcast(hj);
      const V half_h = V::broadcast(0.5 * hj);
      const V sixth_h = V::broadcast(hj / 6.0);
      const CV<V> p0 = coeff(2 * j);
      const CV<V> pm = coeff(2 * j + 1);
      const CV<V> p1 = coeff(2 * j + 2);
      rk4_step(a, h, half_h, sixth_h, p0, pm, p1);
      rk4_step(c, h, half_h, sixth_h, p0, pm, p1);
    }
    a.y.re.store(&b.out_re[0 * lanes + l]);
    a.y.im.store(&b.out_im[0 * lanes + l]);
    a.v.re.store(&b.out_re[1 * lanes + l]);
    a.v.im.store(&b.out_im[1 * lanes + l]);
    c.y.re.store(&b.out_re[2 * lanes + l]);
    c.y.im.store(&b.out_im[2 * lanes + l]);
    c.v.re.store(&b.out_re[3 * lanes + l]);
    c.v.im.store(&b.out_im[3 * lanes + l]);
  }
}

/// Single-lane packed type used by the scalar reference and vector tails.
struct Scalar1 {
  static constexpr std::size_t width = 1;
  double v;

  static Scalar1 load(const double* p) { return {*p}; }
  static Scalar1 broadcast(double x) { return {x}; }
  void store(double* p) const { *p = v; }

  friend Scalar1 operator+(Scalar1 a, Scalar1 b) { return {a.v + b.v}; }
  friend Scalar1 operator-(Scalar1 a, Scalar1 b) { return {a.v - b.v}; }
  friend Scalar1 operator*(Scalar1 a, Scalar1 b) { return {a.v * b.v}; }
  friend Scalar1 operator-(Scalar1 a) { return {-a.v}; }
};

}  // namespace nhf::simd::detail
