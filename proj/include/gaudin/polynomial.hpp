#ifndef GAUDIN_POLYNOMIAL_HPP
#define GAUDIN_POLYNOMIAL_HPP

#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaudin/scalar_traits.hpp"

namespace gaudin {

// Dense univariate polynomial in u with coefficients of scalar type S,
// stored by ascending degree.  The zero polynomial is the empty coefficient
// list and reports degree -1.  Trailing coefficients that are exactly zero
// are always stripped; tolerance-based stripping for float coefficients is
// an explicit operation (trimmed), never implicit.
template <class S>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<S> coeffs) : c_(coeffs) { trim(); }
  Polynomial(const S& constant) : c_{constant} { trim(); }
  Polynomial(long constant) : c_{S(constant)} { trim(); }

  static Polynomial monomial(int deg, S coeff = S(1)) {
    if (deg < 0) throw std::invalid_argument("monomial: negative degree");
    std::vector<S> c(deg + 1, S(0));
    c[deg] = std::move(coeff);
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  const S& operator[](int k) const {
    static const S zero{0};
    if (k < 0 || k > degree()) return zero;
    return c_[k];
  }
  const std::vector<S>& coeffs() const { return c_; }

  S leading() const {
    if (is_zero()) throw std::invalid_argument("leading of zero polynomial");
    return c_.back();
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), S(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), S(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    return a += b;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    return a -= b;
  }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r = a;
    for (auto& c : r.c_) c = -c;
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<S> c(a.c_.size() + b.c_.size() - 1, S(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial& operator*=(const S& s) {
    for (auto& c : c_) c *= s;
    trim();
    return *this;
  }
  friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
  friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }
  Polynomial& operator/=(const S& s) {
    if (scalar_traits<S>::is_zero(s))
      throw std::invalid_argument("polynomial division by zero scalar");
    for (auto& c : c_) c /= s;
    return *this;
  }
  friend Polynomial operator/(Polynomial a, const S& s) { return a /= s; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) {
    return !(a == b);
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<S> c(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      c[i - 1] = c_[i] * S(static_cast<long>(i));
    return Polynomial(std::move(c));
  }

  S eval(const S& x) const {
    S r(0);
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  // Coefficients of p(u + c): the Taylor expansion at c, by repeated
  // synthetic division.  O(d^2) scalar operations.
  Polynomial taylor_shift(const S& c) const {
    std::vector<S> work(c_);
    std::vector<S> out(c_.size(), S(0));
    for (std::size_t k = 0; k < c_.size(); ++k) {
      // Divide work by (u - c): remainder is the next Taylor coefficient.
      S carry(0);
      for (std::size_t i = work.size(); i-- > 0;) {
        S tmp = work[i] + carry * c;
        work[i] = carry;
        carry = tmp;
      }
      out[k] = carry;
      if (!work.empty()) work.pop_back();
    }
    return Polynomial(std::move(out));
  }

  // rev(p)(x) = x^{deg p} * p(1/x).
  Polynomial reversed() const {
    std::vector<S> c(c_.rbegin(), c_.rend());
    return Polynomial(std::move(c));
  }

  // Copy with leading coefficients of magnitude <= threshold removed.
  Polynomial trimmed(const typename scalar_traits<S>::real_type& threshold)
      const {
    std::vector<S> c = c_;
    while (!c.empty() &&
           !(scalar_traits<S>::abs(c.back()) > threshold))
      c.pop_back();
    return Polynomial(std::move(c));
  }

  typename scalar_traits<S>::real_type coeff_scale() const {
    using ST = scalar_traits<S>;
    typename ST::real_type best = ST::abs(S(0));
    for (const auto& c : c_) {
      auto a = ST::abs(c);
      if (a > best) best = a;
    }
    return best;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      if (scalar_traits<S>::is_zero(c_[k])) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << scalar_str(c_[k]) << ")";
      if (k > 0) os << "*u^" << k;
    }
    return os.str();
  }

 private:
  static std::string scalar_str(const Rational& q) { return q.get_str(); }
  static std::string scalar_str(const MpComplex& z) {
    return z.real().str() + (z.imag() < MpReal(0L) ? "-" : "+") +
           abs(z.imag()).str() + "i";
  }

  void trim() {
    while (!c_.empty() && scalar_traits<S>::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<S> c_;
};

template <class S>
Polynomial<S> from_roots(const std::vector<S>& roots) {
  Polynomial<S> p(1L);
  for (const auto& r : roots)
    p *= Polynomial<S>({-r, S(1)});
  return p;
}

template <class S>
Polynomial<S> monic(const Polynomial<S>& p) {
  if (p.is_zero()) throw std::invalid_argument("monic of zero polynomial");
  return p / p.leading();
}

// Quotient and remainder; requires a nonzero divisor with invertible
// leading coefficient (always true over a field).
template <class S>
std::pair<Polynomial<S>, Polynomial<S>> divrem(const Polynomial<S>& a,
                                               const Polynomial<S>& b) {
  if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial<S>(), a};
  std::vector<S> rem(a.coeffs());
  int db = b.degree();
  std::vector<S> quo(a.degree() - db + 1, S(0));
  S lead = b.leading();
  for (int k = a.degree(); k >= db; --k) {
    S q = rem[k] / lead;
    if (!scalar_traits<S>::is_zero(q)) {
      quo[k - db] = q;
      for (int j = 0; j <= db; ++j) rem[k - db + j] -= q * b[j];
    }
    rem[k] = S(0);
  }
  return {Polynomial<S>(std::move(quo)), Polynomial<S>(std::move(rem))};
}

template <class S>
Polynomial<S> exact_divide(const Polynomial<S>& a, const Polynomial<S>& b) {
  auto [q, r] = divrem(a, b);
  if (!r.is_zero()) throw std::invalid_argument("exact_divide: nonzero remainder");
  return q;
}

// Monic gcd in the exact domain.
inline Polynomial<Rational> gcd(Polynomial<Rational> a, Polynomial<Rational> b) {
  while (!b.is_zero()) {
    auto r = divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return monic(a);
}

template <class S>
Polynomial<S> pow(Polynomial<S> base, long e) {
  if (e < 0) throw std::invalid_argument("polynomial pow: negative exponent");
  Polynomial<S> r(1L);
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

template <class S2, class S1>
Polynomial<S2> convert_poly(const Polynomial<S1>& p);

template <>
inline Polynomial<MpComplex> convert_poly<MpComplex, Rational>(
    const Polynomial<Rational>& p) {
  std::vector<MpComplex> c(p.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = MpComplex(p.coeffs()[i]);
  return Polynomial<MpComplex>(std::move(c));
}
template <>
inline Polynomial<Rational> convert_poly<Rational, Rational>(
    const Polynomial<Rational>& p) {
  return p;
}
template <>
inline Polynomial<MpComplex> convert_poly<MpComplex, MpComplex>(
    const Polynomial<MpComplex>& p) {
  return p;
}

// Wronskian determinant Wr(g_1..g_l)(u) = det(g_j^{(i-1)}), expanded by
// Laplace recursion on the first row of derivative orders.  The sizes here
// are tiny (l <= N <= 4), so no effort is spent on asymptotics.
template <class S>
Polynomial<S> wronskian(const std::vector<Polynomial<S>>& g) {
  if (g.empty()) throw std::invalid_argument("wronskian of empty list");
  std::size_t l = g.size();
  // ders[i][j] = g_j^{(i)}
  std::vector<std::vector<Polynomial<S>>> ders(l, std::vector<Polynomial<S>>(l));
  ders[0] = g;
  for (std::size_t i = 1; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) ders[i][j] = ders[i - 1][j].derivative();

  std::vector<std::size_t> cols(l);
  for (std::size_t j = 0; j < l; ++j) cols[j] = j;

  struct Expand {
    const std::vector<std::vector<Polynomial<S>>>& d;
    Polynomial<S> run(std::size_t row, std::vector<std::size_t>& cs) {
      if (cs.empty()) return Polynomial<S>(1L);
      Polynomial<S> acc;
      for (std::size_t p = 0; p < cs.size(); ++p) {
        std::size_t j = cs[p];
        if (d[row][j].is_zero()) continue;
        std::vector<std::size_t> rest;
        rest.reserve(cs.size() - 1);
        for (std::size_t q = 0; q < cs.size(); ++q)
          if (q != p) rest.push_back(cs[q]);
        Polynomial<S> term = d[row][j] * run(row + 1, rest);
        if (p % 2 == 0)
          acc += term;
        else
          acc -= term;
      }
      return acc;
    }
  };
  Expand e{ders};
  return e.run(0, cols);
}

}  // namespace gaudin

#endif
