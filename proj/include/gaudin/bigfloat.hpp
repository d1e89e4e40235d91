#ifndef GAUDIN_BIGFLOAT_HPP
#define GAUDIN_BIGFLOAT_HPP

#include <mpfr.h>

#include <string>
#include <utility>

#include "gaudin/config.hpp"
#include "gaudin/rational.hpp"

namespace gaudin {

// Arbitrary-precision binary float.  Precision is fixed per value at
// construction time (config::precision() bits unless stated otherwise) and
// binary operations produce results at the wider of the two operand
// precisions, rounding to nearest.  boost::multiprecision was not used
// because its runtime precision is counted in decimal digits; the
// tolerances here are powers of two, so the precision knob must be bits.
class MpReal {
 public:
  MpReal() { mpfr_init2(v_, config::precision()); mpfr_set_zero(v_, 1); }
  explicit MpReal(unsigned prec_bits) {
    mpfr_init2(v_, prec_bits);
    mpfr_set_zero(v_, 1);
  }
  MpReal(double x) {
    mpfr_init2(v_, config::precision());
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  MpReal(long x) {
    mpfr_init2(v_, config::precision());
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  MpReal(int x) : MpReal(static_cast<long>(x)) {}
  MpReal(const Rational& q) {
    mpfr_init2(v_, config::precision());
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  MpReal(const MpReal& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  MpReal(MpReal&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MpReal() { mpfr_clear(v_); }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }

  MpReal& operator+=(const MpReal& o) { return apply2(mpfr_add, o); }
  MpReal& operator-=(const MpReal& o) { return apply2(mpfr_sub, o); }
  MpReal& operator*=(const MpReal& o) { return apply2(mpfr_mul, o); }
  MpReal& operator/=(const MpReal& o) { return apply2(mpfr_div, o); }

  friend MpReal operator+(MpReal a, const MpReal& b) { return a += b; }
  friend MpReal operator-(MpReal a, const MpReal& b) { return a -= b; }
  friend MpReal operator*(MpReal a, const MpReal& b) { return a *= b; }
  friend MpReal operator/(MpReal a, const MpReal& b) { return a /= b; }
  friend MpReal operator-(const MpReal& a) {
    MpReal r(static_cast<unsigned>(a.precision()));
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator==(const MpReal& a, const MpReal& b) {
    return mpfr_cmp(a.v_, b.v_) == 0;
  }
  friend bool operator!=(const MpReal& a, const MpReal& b) { return !(a == b); }
  friend bool operator<(const MpReal& a, const MpReal& b) {
    return mpfr_cmp(a.v_, b.v_) < 0;
  }
  friend bool operator>(const MpReal& a, const MpReal& b) { return b < a; }
  friend bool operator<=(const MpReal& a, const MpReal& b) { return !(b < a); }
  friend bool operator>=(const MpReal& a, const MpReal& b) { return !(a < b); }

  // 2^k at the current working precision; exact.
  static MpReal pow2(long k) {
    MpReal r;
    mpfr_set_ui_2exp(r.v_, 1, k, MPFR_RNDN);
    return r;
  }

  // Shortest decimal string that reads back to the same value at the same
  // precision; used wherever byte-identical output matters.
  std::string str() const;
  static MpReal from_string(const std::string& s, unsigned prec_bits);

 private:
  template <class F>
  MpReal& apply2(F f, const MpReal& o) {
    mpfr_prec_t p = std::max(precision(), o.precision());
    if (p != precision()) {
      MpReal tmp(static_cast<unsigned>(p));
      f(tmp.v_, v_, o.v_, MPFR_RNDN);
      mpfr_swap(v_, tmp.v_);
    } else {
      f(v_, v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  mpfr_t v_;
};

inline MpReal abs(const MpReal& a) {
  MpReal r(static_cast<unsigned>(a.precision()));
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline MpReal sqrt(const MpReal& a) {
  MpReal r(static_cast<unsigned>(a.precision()));
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline MpReal log(const MpReal& a) {
  MpReal r(static_cast<unsigned>(a.precision()));
  mpfr_log(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline MpReal hypot(const MpReal& a, const MpReal& b) {
  MpReal r(static_cast<unsigned>(std::max(a.precision(), b.precision())));
  mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline MpReal atan2(const MpReal& y, const MpReal& x) {
  MpReal r(static_cast<unsigned>(std::max(x.precision(), y.precision())));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
inline MpReal floor(const MpReal& a) {
  MpReal r(static_cast<unsigned>(a.precision()));
  mpfr_floor(r.get(), a.get());
  return r;
}
inline MpReal round(const MpReal& a) {
  MpReal r(static_cast<unsigned>(a.precision()));
  mpfr_round(r.get(), a.get());
  return r;
}
inline const MpReal& real(const MpReal& a) { return a; }
inline MpReal imag(const MpReal&) { return MpReal(0L); }
inline const MpReal& conj(const MpReal& a) { return a; }
inline MpReal abs2(const MpReal& a) { return a * a; }

// Complex number over MpReal.  Kept as a plain pair; std::complex is not
// usable because its arithmetic assumes a trivially copyable value type.
class MpComplex {
 public:
  MpComplex() = default;
  MpComplex(MpReal re) : re_(std::move(re)) {}
  MpComplex(MpReal re, MpReal im) : re_(std::move(re)), im_(std::move(im)) {}
  MpComplex(double re) : re_(re) {}
  MpComplex(long re) : re_(re) {}
  MpComplex(int re) : re_(static_cast<long>(re)) {}
  MpComplex(const Rational& q) : re_(q) {}

  const MpReal& real() const { return re_; }
  const MpReal& imag() const { return im_; }
  MpReal& real() { return re_; }
  MpReal& imag() { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  MpComplex& operator+=(const MpComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  MpComplex& operator-=(const MpComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  MpComplex& operator*=(const MpComplex& o) {
    MpReal r = re_ * o.re_ - im_ * o.im_;
    MpReal i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  MpComplex& operator/=(const MpComplex& o) {
    // Smith's algorithm; robust against overflow of |o|^2.
    if (abs(o.re_) >= abs(o.im_)) {
      MpReal t = o.im_ / o.re_;
      MpReal d = o.re_ + o.im_ * t;
      MpReal r = (re_ + im_ * t) / d;
      MpReal i = (im_ - re_ * t) / d;
      re_ = std::move(r);
      im_ = std::move(i);
    } else {
      MpReal t = o.re_ / o.im_;
      MpReal d = o.re_ * t + o.im_;
      MpReal r = (re_ * t + im_) / d;
      MpReal i = (im_ * t - re_) / d;
      re_ = std::move(r);
      im_ = std::move(i);
    }
    return *this;
  }

  friend MpComplex operator+(MpComplex a, const MpComplex& b) { return a += b; }
  friend MpComplex operator-(MpComplex a, const MpComplex& b) { return a -= b; }
  friend MpComplex operator*(MpComplex a, const MpComplex& b) { return a *= b; }
  friend MpComplex operator/(MpComplex a, const MpComplex& b) { return a /= b; }
  friend MpComplex operator-(const MpComplex& a) {
    return MpComplex(-a.re_, -a.im_);
  }
  friend bool operator==(const MpComplex& a, const MpComplex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const MpComplex& a, const MpComplex& b) {
    return !(a == b);
  }

 private:
  MpReal re_;
  MpReal im_;
};

inline const MpReal& real(const MpComplex& z) { return z.real(); }
inline const MpReal& imag(const MpComplex& z) { return z.imag(); }
inline MpComplex conj(const MpComplex& z) {
  return MpComplex(z.real(), -z.imag());
}
inline MpReal abs2(const MpComplex& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}
inline MpReal abs(const MpComplex& z) { return hypot(z.real(), z.imag()); }
inline MpReal arg(const MpComplex& z) { return atan2(z.imag(), z.real()); }
inline MpComplex sqrt(const MpComplex& z) {
  if (z.imag().is_zero()) {
    if (z.real() >= MpReal(0L)) return MpComplex(sqrt(z.real()));
    return MpComplex(MpReal(0L), sqrt(-z.real()));
  }
  MpReal m = abs(z);
  MpReal w = sqrt((m + abs(z.real())) / MpReal(2L));
  if (z.real() >= MpReal(0L))
    return MpComplex(w, z.imag() / (MpReal(2L) * w));
  MpReal iw = z.imag() >= MpReal(0L) ? w : -w;
  return MpComplex(z.imag() / (MpReal(2L) * iw), iw);
}

}  // namespace gaudin

#endif
