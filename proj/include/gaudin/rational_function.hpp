#ifndef GAUDIN_RATIONAL_FUNCTION_HPP
#define GAUDIN_RATIONAL_FUNCTION_HPP

#include <climits>
#include <utility>

#include "gaudin/polynomial.hpp"

namespace gaudin {

// Quotient of polynomials with monic denominator.  In the exact domain the
// fraction is always fully reduced, so equal values have equal
// representations.  In the float domain reduction is normalization only;
// common factors are tolerated and all consumers work through evaluation
// or Laurent expansion, which do not care.
template <class S>
class RationalFunction {
 public:
  RationalFunction() : den_(1L) {}
  RationalFunction(Polynomial<S> num) : num_(std::move(num)), den_(1L) {}
  RationalFunction(const S& constant) : num_(constant), den_(1L) {}
  RationalFunction(long constant) : num_(constant), den_(1L) {}
  RationalFunction(Polynomial<S> num, Polynomial<S> den)
      : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
      throw std::invalid_argument("rational function with zero denominator");
    reduce();
  }

  const Polynomial<S>& num() const { return num_; }
  const Polynomial<S>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  RationalFunction& operator+=(const RationalFunction& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
    reduce();
    return *this;
  }
  RationalFunction& operator-=(const RationalFunction& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ = den_ * o.den_;
    reduce();
    return *this;
  }
  RationalFunction& operator*=(const RationalFunction& o) {
    num_ = num_ * o.num_;
    den_ = den_ * o.den_;
    reduce();
    return *this;
  }
  RationalFunction& operator/=(const RationalFunction& o) {
    if (o.is_zero())
      throw std::invalid_argument("rational function division by zero");
    num_ = num_ * o.den_;
    den_ = den_ * o.num_;
    if (den_.is_zero())
      throw std::invalid_argument("rational function division by zero");
    reduce();
    return *this;
  }

  friend RationalFunction operator+(RationalFunction a,
                                    const RationalFunction& b) {
    return a += b;
  }
  friend RationalFunction operator-(RationalFunction a,
                                    const RationalFunction& b) {
    return a -= b;
  }
  friend RationalFunction operator*(RationalFunction a,
                                    const RationalFunction& b) {
    return a *= b;
  }
  friend RationalFunction operator/(RationalFunction a,
                                    const RationalFunction& b) {
    return a /= b;
  }
  friend RationalFunction operator-(const RationalFunction& a) {
    RationalFunction r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    if constexpr (scalar_traits<S>::is_exact)
      return a.num_ == b.num_ && a.den_ == b.den_;
    else
      return a.num_ * b.den_ == b.num_ * a.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) {
    return !(a == b);
  }

  RationalFunction derivative() const {
    return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(),
                            den_ * den_);
  }

  S eval(const S& x) const {
    S d = den_.eval(x);
    if (scalar_traits<S>::is_zero(d))
      throw std::invalid_argument("rational function evaluated at a pole");
    return num_.eval(x) / d;
  }

  std::string str() const { return "(" + num_.str() + ")/(" + den_.str() + ")"; }

 private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = Polynomial<S>(1L);
      return;
    }
    if constexpr (scalar_traits<S>::is_exact) {
      auto g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = exact_divide(num_, g);
        den_ = exact_divide(den_, g);
      }
    }
    S lead = den_.leading();
    num_ /= lead;
    den_ /= lead;
  }

  Polynomial<S> num_;
  Polynomial<S> den_;
};

template <class S2, class S1>
RationalFunction<S2> convert_rf(const RationalFunction<S1>& f) {
  return RationalFunction<S2>(convert_poly<S2>(f.num()),
                              convert_poly<S2>(f.den()));
}

// Order of vanishing of p at b: the index of the first Taylor coefficient
// whose magnitude exceeds rel_tol times the largest Taylor coefficient
// (exact domain: the first nonzero one).  INT_MAX for the zero polynomial.
template <class S>
int ord_at(const Polynomial<S>& p, const S& b,
           const typename scalar_traits<S>::real_type& rel_tol) {
  using ST = scalar_traits<S>;
  if (p.is_zero()) return INT_MAX;
  Polynomial<S> t = p.taylor_shift(b);
  auto scale = t.coeff_scale();
  auto threshold = scale * rel_tol;
  for (int k = 0; k <= t.degree(); ++k)
    if (!ST::negligible(ST::abs(t[k]), threshold)) return k;
  return INT_MAX;
}

// Pole order of f at b (negative values mean a zero of that order).
template <class S>
int pole_order(const RationalFunction<S>& f, const S& b,
               const typename scalar_traits<S>::real_type& rel_tol) {
  if (f.is_zero()) return -INT_MAX;
  int on = ord_at(f.num(), b, rel_tol);
  int od = ord_at(f.den(), b, rel_tol);
  return od - on;
}

// Coefficient of (u-b)^k in the Laurent expansion of f at b, by truncated
// power-series division of the shifted numerator by the shifted
// denominator.
template <class S>
S laurent_coeff(const RationalFunction<S>& f, const S& b, int k,
                const typename scalar_traits<S>::real_type& rel_tol) {
  if (f.is_zero()) return S(0);
  Polynomial<S> tn = f.num().taylor_shift(b);
  Polynomial<S> td = f.den().taylor_shift(b);
  int w = ord_at(f.num(), b, rel_tol);
  int v = ord_at(f.den(), b, rel_tol);
  // f = (u-b)^{w-v} * (series starting with nonzero constant term)
  int m = k - (w - v);
  if (m < 0) return S(0);
  // gamma_j, j = 0..m, from alpha_{w+j} = sum_i beta_{v+i} gamma_{j-i}
  std::vector<S> gamma(m + 1);
  S b0 = td[v];
  for (int j = 0; j <= m; ++j) {
    S acc = tn[w + j];
    for (int i = 1; i <= j; ++i) acc -= td[v + i] * gamma[j - i];
    gamma[j] = acc / b0;
  }
  return gamma[m];
}

}  // namespace gaudin

#endif
