#ifndef GAUDIN_DIFFOP_HPP
#define GAUDIN_DIFFOP_HPP

#include <algorithm>
#include <map>

#include "gaudin/linalg.hpp"
#include "gaudin/partition.hpp"
#include "gaudin/rational_function.hpp"
#include "gaudin/roots.hpp"

namespace gaudin {

// Linear differential operator sum_k c_k(u) dd^k with rational-function
// coefficients, stored by ascending power of dd (the derivative symbol).
// The zero operator is not representable and not needed; order 0 constants
// are.
template <class S>
class ScalarDiffOp {
 public:
  using RF = RationalFunction<S>;

  ScalarDiffOp() : c_{RF(1L)} {}
  explicit ScalarDiffOp(std::vector<RF> ascending) : c_(std::move(ascending)) {
    if (c_.empty()) throw std::invalid_argument("operator with no coefficients");
    while (c_.size() > 1 && c_.back().is_zero()) c_.pop_back();
  }

  static ScalarDiffOp identity() { return ScalarDiffOp(); }
  static ScalarDiffOp dee() {
    return ScalarDiffOp(std::vector<RF>{RF(), RF(1L)});
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  // Coefficient of dd^k.
  const RF& coeff(int k) const {
    static const RF zero{};
    if (k < 0 || k > order()) return zero;
    return c_[k];
  }
  bool is_monic() const {
    return c_.back() == RF(1L);
  }

  friend ScalarDiffOp operator+(const ScalarDiffOp& a, const ScalarDiffOp& b) {
    std::vector<RF> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k)
      c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
    return ScalarDiffOp(std::move(c));
  }
  friend ScalarDiffOp operator-(const ScalarDiffOp& a, const ScalarDiffOp& b) {
    std::vector<RF> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k)
      c[k] = a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k));
    return ScalarDiffOp(std::move(c));
  }
  friend ScalarDiffOp operator*(const RF& f, const ScalarDiffOp& a) {
    std::vector<RF> c = a.c_;
    for (auto& x : c) x = f * x;
    return ScalarDiffOp(std::move(c));
  }

  friend bool operator==(const ScalarDiffOp& a, const ScalarDiffOp& b) {
    return a.c_ == b.c_;
  }
  friend bool operator!=(const ScalarDiffOp& a, const ScalarDiffOp& b) {
    return !(a == b);
  }

  std::string str() const {
    std::string s;
    for (int k = order(); k >= 0; --k) {
      if (!s.empty()) s += " + ";
      s += c_[k].str() + "*dd^" + std::to_string(k);
    }
    return s;
  }

 private:
  std::vector<RF> c_;
};

namespace detail {

inline long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Falling factorial r(r-1)...(r-m+1) as a polynomial in r.
template <class S>
Polynomial<S> falling_factorial(int m) {
  Polynomial<S> p(1L);
  for (int i = 0; i < m; ++i)
    p *= Polynomial<S>({S(static_cast<long>(-i)), S(1)});
  return p;
}

}  // namespace detail

// Division by the leading coefficient, with the result's leading
// coefficient pinned to a literal 1 so monicity tests are representation
// independent in the float domain.
template <class S>
ScalarDiffOp<S> monicized(const ScalarDiffOp<S>& d) {
  using RF = RationalFunction<S>;
  RF lead = d.coeff(d.order());
  if (lead.is_zero())
    throw std::invalid_argument("monicized: zero leading coefficient");
  std::vector<RF> c;
  for (int k = 0; k < d.order(); ++k) c.push_back(d.coeff(k) / lead);
  c.push_back(RF(1L));
  return ScalarDiffOp<S>(std::move(c));
}

// Composition: (A o B) f = A(B(f)).  Leibniz expansion of dd^i o b(u).
template <class S>
ScalarDiffOp<S> compose(const ScalarDiffOp<S>& a, const ScalarDiffOp<S>& b) {
  using RF = RationalFunction<S>;
  std::vector<RF> out(a.order() + b.order() + 1);
  for (int i = 0; i <= a.order(); ++i) {
    if (a.coeff(i).is_zero()) continue;
    for (int j = 0; j <= b.order(); ++j) {
      if (b.coeff(j).is_zero()) continue;
      RF der = b.coeff(j);
      for (int m = 0; m <= i; ++m) {
        if (!der.is_zero())
          out[i - m + j] += a.coeff(i) * RF(S(detail::binom(i, m))) * der;
        if (m < i) der = der.derivative();
      }
    }
  }
  return ScalarDiffOp<S>(std::move(out));
}

template <class S>
RationalFunction<S> apply(const ScalarDiffOp<S>& d, const Polynomial<S>& f) {
  RationalFunction<S> acc;
  Polynomial<S> der = f;
  for (int k = 0; k <= d.order(); ++k) {
    if (!d.coeff(k).is_zero() && !der.is_zero())
      acc += d.coeff(k) * RationalFunction<S>(der);
    der = der.derivative();
  }
  return acc;
}

// (dd - chi_1) o (dd - chi_2) o ... o (dd - chi_N), first factor leftmost.
template <class S>
ScalarDiffOp<S> from_factors(const std::vector<RationalFunction<S>>& chi) {
  if (chi.empty())
    throw std::invalid_argument("from_factors: empty factor list");
  ScalarDiffOp<S> d = ScalarDiffOp<S>::identity();
  for (const auto& x : chi) {
    ScalarDiffOp<S> factor(
        std::vector<RationalFunction<S>>{-x, RationalFunction<S>(1L)});
    d = compose(d, factor);
  }
  return d;
}

// Indicial polynomial of a monic operator at a finite point: substituting
// f = (u-b)^r into (u-b)^N D and keeping the lowest (u-b)-order terms gives
// sum_i c_i * r(r-1)...(r-(N-i)+1) with c_i the coefficient of (u-b)^{-i}
// in the Laurent expansion of the dd^{N-i} coefficient.  A pole of order
// exceeding i anywhere makes the singularity irregular.
template <class S>
Polynomial<S> indicial_polynomial(
    const ScalarDiffOp<S>& d, const S& b,
    const typename scalar_traits<S>::real_type& rel_tol) {
  if (!d.is_monic())
    throw std::invalid_argument("indicial_polynomial: operator must be monic");
  int n = d.order();
  Polynomial<S> p;
  for (int i = 0; i <= n; ++i) {
    const auto& h = d.coeff(n - i);  // coefficient of dd^{n-i}
    if (h.is_zero()) continue;
    if (pole_order(h, b, rel_tol) > i)
      throw compute_error("irregular singular point");
    S ci = laurent_coeff(h, b, -i, rel_tol);
    if (!scalar_traits<S>::is_zero(ci))
      p += detail::falling_factorial<S>(n - i) * ci;
  }
  return p;
}

namespace detail {

// All roots, with multiplicity, of a rational-coefficient polynomial whose
// roots are themselves rational; integer roots are found through divisor
// candidates of the constant term (|root| <= 4096), what remains is solved
// in closed form through degree 2.  Anything beyond that range is outside
// the intended use and reported as a failure.
inline std::vector<Rational> rational_roots_exact(Polynomial<Rational> p) {
  if (p.is_zero())
    throw std::invalid_argument("roots of the zero polynomial");
  std::vector<Rational> roots;
  while (!p.is_zero() && p[0] == 0 && p.degree() > 0) {
    roots.push_back(0);
    std::vector<Rational> c(p.coeffs().begin() + 1, p.coeffs().end());
    p = Polynomial<Rational>(std::move(c));
  }
  if (p.degree() > 0) {
    // Integerize: common denominator, then strip integer content.
    mpz_class den_lcm = 1;
    for (const auto& c : p.coeffs())
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
              c.get_den().get_mpz_t());
    std::vector<mpz_class> ic;
    for (const auto& c : p.coeffs())
      ic.push_back(mpz_class(c * Rational(den_lcm)));
    mpz_class a0 = ic.front();
    for (long cand_abs = 1; cand_abs <= 4096 && p.degree() > 2; ++cand_abs) {
      if (!mpz_divisible_ui_p(a0.get_mpz_t(), cand_abs)) continue;
      for (long sign : {1L, -1L}) {
        Rational cand(sign * cand_abs);
        while (p.degree() > 0 && p.eval(cand) == 0) {
          roots.push_back(cand);
          p = exact_divide(p, Polynomial<Rational>({-cand, Rational(1)}));
        }
      }
      if (p.degree() > 0 && p[0] != 0) {
        den_lcm = 1;
        for (const auto& c : p.coeffs())
          mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                  c.get_den().get_mpz_t());
        a0 = mpz_class(p[0] * Rational(den_lcm));
      }
    }
  }
  if (p.degree() == 1) {
    roots.push_back(-p[0] / p[1]);
  } else if (p.degree() == 2) {
    Rational disc = p[1] * p[1] - 4 * p[2] * p[0];
    auto sq = rational_sqrt(disc);
    if (!sq)
      throw compute_error("indicial roots are not rational");
    roots.push_back((-p[1] + *sq) / (2 * p[2]));
    roots.push_back((-p[1] - *sq) / (2 * p[2]));
  } else if (p.degree() > 2) {
    throw compute_error("indicial roots are not rational");
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace detail

// Exponents of a monic operator at a finite point: the order()-many indicial
// roots.  Ordinary points yield {0, 1, ..., N-1}.
inline std::vector<Rational> exponents_at(const ScalarDiffOp<Rational>& d,
                                          const Rational& b) {
  Polynomial<Rational> ip = indicial_polynomial<Rational>(d, b, Rational(0));
  auto roots = detail::rational_roots_exact(ip);
  if (static_cast<int>(roots.size()) != d.order())
    throw compute_error("indicial polynomial dropped degree");
  return roots;
}

inline std::vector<MpComplex> exponents_at(const ScalarDiffOp<MpComplex>& d,
                                           const MpComplex& b,
                                           const MpReal& rel_tol) {
  Polynomial<MpComplex> ip = indicial_polynomial<MpComplex>(d, b, rel_tol);
  ip = ip.trimmed(ip.coeff_scale() * rel_tol);
  if (ip.degree() != d.order())
    throw compute_error("indicial polynomial dropped degree");
  return poly_roots(ip, config::precision());
}

// The operator rewritten in x = 1/u: coefficients a_k(1/x), derivative
// becomes -x^2 d/dx.  Normalized monic; its exponents at x=0 are the
// exponents at infinity (a solution ~ u^d corresponds to x^{-d}).
template <class S>
ScalarDiffOp<S> at_infinity(const ScalarDiffOp<S>& d) {
  using RF = RationalFunction<S>;
  auto substitute = [](const RF& f) {
    const Polynomial<S>&num = f.num(), &den = f.den();
    int dn = num.degree(), dd = den.degree();
    Polynomial<S> n2 = num.reversed();
    Polynomial<S> d2 = den.reversed();
    if (dd > dn)
      n2 *= Polynomial<S>::monomial(dd - dn);
    else if (dn > dd)
      d2 *= Polynomial<S>::monomial(dn - dd);
    return RF(std::move(n2), std::move(d2));
  };
  // mpow[m] = (-x^2 d/dx)^m
  ScalarDiffOp<S> minus_x2_dee(std::vector<RF>{
      RF(), RF(Polynomial<S>::monomial(2, S(-1)))});
  std::vector<ScalarDiffOp<S>> mpow{ScalarDiffOp<S>::identity()};
  for (int m = 1; m <= d.order(); ++m)
    mpow.push_back(compose(mpow.back(), minus_x2_dee));

  ScalarDiffOp<S> acc = substitute(d.coeff(0)) * ScalarDiffOp<S>::identity();
  for (int k = 1; k <= d.order(); ++k)
    if (!d.coeff(k).is_zero())
      acc = acc + substitute(d.coeff(k)) * mpow[k];
  RF lead = acc.coeff(acc.order());
  if (lead.is_zero())
    throw compute_error("leading coefficient vanished in the 1/u chart");
  return monicized(acc);
}

inline std::vector<Rational> exponents_at_infinity(
    const ScalarDiffOp<Rational>& d) {
  if (!d.is_monic())
    throw std::invalid_argument("exponents_at_infinity: operator must be monic");
  return exponents_at(at_infinity(d), Rational(0));
}

inline std::vector<MpComplex> exponents_at_infinity(
    const ScalarDiffOp<MpComplex>& d, const MpReal& rel_tol) {
  return exponents_at(at_infinity(d), MpComplex(0L), rel_tol);
}

// Basis of polynomial solutions of Df = 0 with degree <= degree_bound,
// echelonized (each basis polynomial monic with a distinct leading degree,
// zero coefficients at the other basis members' leading degrees), listed by
// descending degree.
template <class S>
std::vector<Polynomial<S>> polynomial_kernel(
    const ScalarDiffOp<S>& d, long degree_bound,
    const typename scalar_traits<S>::real_type& rel_tol = {}) {
  if (degree_bound < 0)
    throw std::invalid_argument("polynomial_kernel: negative degree bound");
  int n = d.order();
  // Clear denominators: Q = product of denominators (lcm in spirit; the
  // exact domain reduces, so repetition only pads degrees harmlessly).
  Polynomial<S> q(1L);
  if constexpr (scalar_traits<S>::is_exact) {
    for (int k = 0; k <= n; ++k) {
      const auto& den = d.coeff(k).den();
      auto g = gcd(q, den);
      q *= exact_divide(den, g);
    }
  } else {
    for (int k = 0; k <= n; ++k)
      if (!d.coeff(k).is_zero()) q *= d.coeff(k).den();
  }
  std::vector<Polynomial<S>> g(n + 1);
  int max_row = 0;
  for (int k = 0; k <= n; ++k) {
    if (d.coeff(k).is_zero()) continue;
    g[k] = d.coeff(k).num() * divrem(q, d.coeff(k).den()).first;
    max_row = std::max(max_row, g[k].degree() + static_cast<int>(degree_bound));
  }
  long cols = degree_bound + 1;
  MatX<S> m = MatX<S>::Zero(max_row + 1, cols);
  for (long c = 0; c <= degree_bound; ++c) {
    for (int k = 0; k <= n && k <= c; ++k) {
      if (g[k].is_zero()) continue;
      // dd^k u^c = c(c-1)...(c-k+1) u^{c-k}
      S ff(1);
      for (int i = 0; i < k; ++i) ff *= S(c - i);
      for (int j = 0; j <= g[k].degree(); ++j)
        m(j + c - k, c) += g[k][j] * ff;
    }
  }
  MatX<S> ns = nullspace<S>(m, rel_tol);
  if (ns.cols() == 0) return {};
  // Echelonize with columns listed by descending degree so each row of the
  // reduced form is a monic polynomial with distinct leading degree.
  MatX<S> rows(ns.cols(), cols);
  for (Eigen::Index r = 0; r < ns.cols(); ++r)
    for (long c = 0; c < cols; ++c) rows(r, c) = ns(cols - 1 - c, r);
  Echelon<S> e = rref<S>(rows, rel_tol);
  std::vector<Polynomial<S>> basis;
  for (int r = 0; r < e.rank(); ++r) {
    std::vector<S> coeffs(cols);
    for (long c = 0; c < cols; ++c) coeffs[cols - 1 - c] = e.mat(r, c);
    basis.emplace_back(std::move(coeffs));
  }
  return basis;
}

template <class S>
struct DeltaMembershipReport {
  bool pass = false;
  bool weight_consistent = false;
  bool cond_singular_points = false;
  bool cond_exponents_finite = false;
  bool cond_exponents_infinity = false;
  bool cond_kernel = false;
  bool irregular = false;
  long degree_bound = -1;
  std::vector<std::vector<S>> exponents_finite;  // per singular point
  std::vector<S> exponents_infinity;
  std::vector<Polynomial<S>> kernel_basis;
  std::vector<std::string> notes;
};

namespace detail {

inline bool match_exponents(const std::vector<Rational>& got,
                            const std::vector<long>& expect, double) {
  if (got.size() != expect.size()) return false;
  auto sorted = expect;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < got.size(); ++i)
    if (got[i] != Rational(sorted[i])) return false;
  return true;
}

inline bool match_exponents(const std::vector<MpComplex>& got,
                            const std::vector<long>& expect, double tol) {
  if (got.size() != expect.size()) return false;
  std::vector<bool> used(got.size(), false);
  for (long e : expect) {
    bool hit = false;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (used[i]) continue;
      if (abs(got[i] - MpComplex(e)).to_double() <= tol) {
        used[i] = true;
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

// Poles of f that are not accounted for by the allowed points.
template <class S>
bool has_stray_pole(const RationalFunction<S>& f, const std::vector<S>& allowed,
                    const typename scalar_traits<S>::real_type& rel_tol,
                    double match_tol, std::string& where) {
  if (f.is_zero() || f.is_polynomial()) return false;
  if constexpr (scalar_traits<S>::is_exact) {
    Polynomial<S> den = f.den();
    for (const auto& b : allowed) {
      Polynomial<S> lin({-b, S(1)});
      while (den.degree() > 0 && divrem(den, lin).second.is_zero())
        den = exact_divide(den, lin);
    }
    if (den.degree() > 0) {
      where = "denominator keeps a factor of degree " +
              std::to_string(den.degree());
      return true;
    }
    return false;
  } else {
    auto dr = poly_roots(f.den(), config::precision());
    for (const auto& r : dr) {
      bool near = false;
      for (const auto& b : allowed)
        if (abs(r - b).to_double() <= match_tol * (1.0 + abs(b).to_double()))
          near = true;
      if (near) continue;
      if (pole_order(f, r, rel_tol) >= 1) {
        where = "pole found away from the allowed points";
        return true;
      }
    }
    return false;
  }
}

}  // namespace detail

// Membership test for the class of monic order-N operators with prescribed
// singular points b_s and infinity, prescribed exponents, and polynomial
// kernel.  Never throws for honest negative answers; malformed input
// (weights aside, which are a stated immediate-fail) raises input_error.
template <class S>
DeltaMembershipReport<S> delta_membership(
    const ScalarDiffOp<S>& d, const std::vector<Partition>& big_lambda,
    const Partition& lambda, const std::vector<S>& b,
    const typename scalar_traits<S>::real_type& rel_tol = {},
    double match_tol = 1e-6) {
  using ST = scalar_traits<S>;
  if (big_lambda.size() != b.size())
    throw input_error("one local partition per singular point required");
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      if (ST::is_zero(b[i] - b[j]))
        throw input_error("singular points must be pairwise distinct");
  int n = d.order();
  if (lambda.n_parts() != n)
    throw input_error("partition size must equal operator order");
  for (const auto& l : big_lambda)
    if (l.n_parts() != n)
      throw input_error("local partition size must equal operator order");

  DeltaMembershipReport<S> rep;
  long total = 0;
  for (const auto& l : big_lambda) total += l.weight();
  rep.weight_consistent = (total == lambda.weight());
  if (!rep.weight_consistent) {
    rep.notes.push_back("weight mismatch: sum of local weights " +
                        std::to_string(total) + " != " +
                        std::to_string(lambda.weight()));
    return rep;
  }

  // a) singular points confined to b and infinity.
  rep.cond_singular_points = true;
  for (int k = 0; k <= n; ++k) {
    std::string where;
    if (detail::has_stray_pole(d.coeff(k), b, rel_tol, match_tol, where)) {
      rep.cond_singular_points = false;
      rep.notes.push_back("coefficient of dd^" + std::to_string(k) + ": " +
                          where);
    }
  }

  // b) exponents at each b_s.
  rep.cond_exponents_finite = true;
  for (std::size_t s = 0; s < b.size(); ++s) {
    std::vector<S> got;
    try {
      if constexpr (ST::is_exact)
        got = exponents_at(d, b[s]);
      else
        got = exponents_at(d, b[s], rel_tol);
    } catch (const compute_error& e) {
      rep.irregular = true;
      rep.cond_exponents_finite = false;
      rep.notes.push_back("point " + std::to_string(s) + ": " + e.what());
      rep.exponents_finite.emplace_back();
      continue;
    }
    rep.exponents_finite.push_back(got);
    if (!detail::match_exponents(got, big_lambda[s].finite_exponents(),
                                 match_tol)) {
      rep.cond_exponents_finite = false;
      rep.notes.push_back("exponent multiset mismatch at point " +
                          std::to_string(s));
    }
  }

  // c) exponents at infinity; also the source of the kernel degree bound.
  bool infinity_ok = false;
  try {
    if constexpr (ST::is_exact)
      rep.exponents_infinity = exponents_at_infinity(d);
    else
      rep.exponents_infinity = exponents_at_infinity(d, rel_tol);
    infinity_ok = true;
  } catch (const compute_error& e) {
    rep.irregular = true;
    rep.notes.push_back(std::string("infinity: ") + e.what());
  }
  rep.cond_exponents_infinity =
      infinity_ok && detail::match_exponents(
                         rep.exponents_infinity,
                         lambda.infinity_exponents(), match_tol);
  if (infinity_ok && !rep.cond_exponents_infinity)
    rep.notes.push_back("exponent multiset mismatch at infinity");

  // d) polynomial kernel of dimension N, degrees bounded by the largest
  // -exponent at infinity.  Without honest nonpositive integer exponents
  // there is no bound and the condition fails outright.
  rep.cond_kernel = false;
  if (infinity_ok) {
    bool integral = true;
    long bound = 0;
    for (const auto& e : rep.exponents_infinity) {
      long r;
      if constexpr (ST::is_exact) {
        if (e.get_den() != 1) {
          integral = false;
          break;
        }
        r = static_cast<long>(-e.get_num().get_si());
      } else {
        double re = e.real().to_double(), im = e.imag().to_double();
        r = std::lround(-re);
        if (std::abs(im) > match_tol || std::abs(-re - r) > match_tol) {
          integral = false;
          break;
        }
      }
      if (r < 0) {
        integral = false;
        break;
      }
      bound = std::max(bound, r);
    }
    if (integral) {
      rep.degree_bound = bound;
      rep.kernel_basis = polynomial_kernel(d, bound, rel_tol);
      rep.cond_kernel = (static_cast<int>(rep.kernel_basis.size()) == n);
      if (!rep.cond_kernel)
        rep.notes.push_back("kernel dimension " +
                            std::to_string(rep.kernel_basis.size()) +
                            " != " + std::to_string(n));
    } else {
      rep.notes.push_back(
          "exponents at infinity are not nonpositive integers; no kernel bound");
    }
  }

  rep.pass = rep.cond_singular_points && rep.cond_exponents_finite &&
             rep.cond_exponents_infinity && rep.cond_kernel;
  return rep;
}

template <class S2, class S1>
ScalarDiffOp<S2> convert_op(const ScalarDiffOp<S1>& d) {
  std::vector<RationalFunction<S2>> c;
  for (int k = 0; k <= d.order(); ++k)
    c.push_back(convert_rf<S2>(d.coeff(k)));
  return ScalarDiffOp<S2>(std::move(c));
}

}  // namespace gaudin

#endif
