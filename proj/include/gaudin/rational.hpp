#ifndef GAUDIN_RATIONAL_HPP
#define GAUDIN_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

#include "gaudin/config.hpp"

namespace gaudin {

using Rational = mpq_class;

// Parse "p", "p/q" or a plain decimal like "-1.25" into a canonical
// rational.  mpq_class's string constructor does not canonicalize, so this
// wrapper is the only sanctioned way to read rationals from text.
inline Rational parse_rational(const std::string& s) {
  std::string t = s;
  auto dot = t.find('.');
  if (dot != std::string::npos && t.find('/') == std::string::npos) {
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    std::size_t frac = t.size() - dot - 1;
    std::string den = "1" + std::string(frac, '0');
    t = digits + "/" + den;
  }
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw input_error("bad rational: '" + s + "'");
  if (q.get_den() == 0) throw input_error("zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) {
  return q.get_str();
}

// p/q in canonical form; the two-argument mpq_class constructor does not
// canonicalize and is unsafe to hand to arithmetic.
inline Rational frac(long p, long q) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// Exact square root if the argument is a perfect square of a rational.
inline std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rational(rn, rd);
}

inline Rational rational_pow(Rational base, long e) {
  if (e < 0) {
    if (base == 0) throw std::invalid_argument("0^negative");
    base = 1 / base;
    e = -e;
  }
  Rational r = 1;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

}  // namespace gaudin

#endif
