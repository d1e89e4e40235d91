#ifndef GAUDIN_SCALAR_TRAITS_HPP
#define GAUDIN_SCALAR_TRAITS_HPP

#include "gaudin/bigfloat.hpp"
#include "gaudin/rational.hpp"

namespace gaudin {

// The library computes in exactly two scalar domains: exact rationals and
// arbitrary-precision complex floats.  Everything downstream is templated
// on the scalar S and consults these traits instead of branching on types,
// so the two domains can never be mixed by accident.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool is_exact = true;
  using real_type = Rational;

  static Rational from_rational(const Rational& q) { return q; }
  static Rational from_int(long v) { return Rational(v); }
  static bool is_zero(const Rational& x) { return x == 0; }
  static Rational abs(const Rational& x) { return ::abs(x); }
  static Rational conj(const Rational& x) { return x; }
  static Rational real_part(const Rational& x) { return x; }
  // Exact domain: a quantity is negligible only when it vanishes.
  static bool negligible(const Rational& mag, const Rational&) {
    return mag == 0;
  }
  static double to_double(const Rational& x) { return x.get_d(); }
};

template <>
struct scalar_traits<MpComplex> {
  static constexpr bool is_exact = false;
  using real_type = MpReal;

  static MpComplex from_rational(const Rational& q) { return MpComplex(q); }
  static MpComplex from_int(long v) { return MpComplex(v); }
  static bool is_zero(const MpComplex& x) { return x.is_zero(); }
  static MpReal abs(const MpComplex& x) { return gaudin::abs(x); }
  static MpComplex conj(const MpComplex& x) { return gaudin::conj(x); }
  static MpReal real_part(const MpComplex& x) { return x.real(); }
  static bool negligible(const MpReal& mag, const MpReal& threshold) {
    return mag <= threshold;
  }
  static double to_double(const MpReal& x) { return x.to_double(); }
};

}  // namespace gaudin

#endif
