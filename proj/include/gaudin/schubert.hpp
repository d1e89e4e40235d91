#ifndef GAUDIN_SCHUBERT_HPP
#define GAUDIN_SCHUBERT_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>

#include "gaudin/diffop.hpp"
#include "gaudin/roots.hpp"
#include "gaudin/weight_function.hpp"

namespace gaudin {

// A point of the cell attached to lambda inside the Grassmannian of
// N-planes in polynomials of degree < d: the unique basis f_i of degree
// d_i = lambda_i + N - i, monic, with no monomials of the other leading
// degrees below its own.  The constructor accepts any basis with the right
// degree set and echelonizes it, so equal subspaces get equal coefficients.
template <class S>
class SchubertPoint {
 public:
  SchubertPoint(Partition lambda, std::vector<Polynomial<S>> basis,
                long ambient = -1)
      : lambda_(std::move(lambda)) {
    int n = lambda_.n_parts();
    if (n < 1) throw input_error("empty partition");
    d_ = ambient < 0 ? lambda_.part(0) + n : ambient;
    if (lambda_.part(0) > d_ - n)
      throw input_error("partition does not fit the ambient degree bound");
    if (static_cast<int>(basis.size()) != n)
      throw input_error("flag basis needs one polynomial per row");
    degrees_ = lambda_.degrees();
    std::sort(basis.begin(), basis.end(),
              [](const Polynomial<S>& a, const Polynomial<S>& b) {
                return a.degree() > b.degree();
              });
    for (int i = 0; i < n; ++i) {
      if (basis[i].is_zero() || basis[i].degree() != degrees_[i])
        throw input_error("basis degrees do not match the cell");
      flag_.push_back(basis[i] / basis[i].leading());
    }
    // Clear the coefficients sitting on lower rows' leading degrees; rows
    // are processed bottom-up so each subtraction uses a finished row.
    for (int i = n - 2; i >= 0; --i)
      for (int j = i + 1; j < n; ++j) {
        S c = flag_[i][static_cast<int>(degrees_[j])];
        if (!scalar_traits<S>::is_zero(c)) flag_[i] -= flag_[j] * c;
      }
  }

  int rank() const { return lambda_.n_parts(); }
  long ambient() const { return d_; }
  const Partition& shape() const { return lambda_; }
  const std::vector<Polynomial<S>>& flag() const { return flag_; }
  const std::vector<long>& degrees() const { return degrees_; }

  friend bool operator==(const SchubertPoint& a, const SchubertPoint& b) {
    return a.lambda_.parts() == b.lambda_.parts() && a.d_ == b.d_ &&
           a.flag_ == b.flag_;
  }
  friend bool operator!=(const SchubertPoint& a, const SchubertPoint& b) {
    return !(a == b);
  }

 private:
  Partition lambda_;
  long d_ = 0;
  std::vector<long> degrees_;
  std::vector<Polynomial<S>> flag_;
};

template <class S2, class S1>
SchubertPoint<S2> convert_point(const SchubertPoint<S1>& x) {
  std::vector<Polynomial<S2>> flag;
  for (const auto& f : x.flag()) flag.push_back(convert_poly<S2>(f));
  return SchubertPoint<S2>(x.shape(), std::move(flag), x.ambient());
}

// y_a = monic Wronskian of the rows below row a, a = 0..N-1.  The leading
// coefficient is a fixed nonzero integer determined by the degree set, so
// the degree check only guards corrupted input.
template <class S>
std::vector<Polynomial<S>> y_polynomials(const SchubertPoint<S>& x) {
  int n = x.rank();
  std::vector<Polynomial<S>> out;
  for (int a = 0; a < n; ++a) {
    std::vector<Polynomial<S>> tail(x.flag().begin() + a, x.flag().end());
    Polynomial<S> w = wronskian(tail);
    long la = 0;
    for (int b = a; b < n; ++b) la += x.shape().part(b);
    if (w.is_zero() || w.degree() != la)
      throw compute_error("degenerate flag");
    out.push_back(w / w.leading());
  }
  return out;
}

namespace detail {

template <class S>
std::vector<std::vector<MpComplex>> root_levels(const SchubertPoint<S>& x) {
  std::vector<std::vector<MpComplex>> levels;
  for (const auto& y : y_polynomials(x))
    levels.push_back(poly_roots(y, config::precision()));
  return levels;
}

// Simplicity within each level and separation between consecutive levels,
// relative to the overall root scale.
inline bool levels_generic(const std::vector<std::vector<MpComplex>>& levels,
                           double tol) {
  MpReal scale(1L);
  for (const auto& lv : levels)
    for (const auto& r : lv) {
      MpReal m = abs(r);
      if (m > scale) scale = m;
    }
  MpReal gap = scale * MpReal(tol);
  for (std::size_t a = 0; a < levels.size(); ++a) {
    for (std::size_t i = 0; i < levels[a].size(); ++i)
      for (std::size_t j = i + 1; j < levels[a].size(); ++j)
        if (abs(levels[a][i] - levels[a][j]) <= gap) return false;
    if (a == 0) continue;
    for (const auto& r : levels[a])
      for (const auto& s : levels[a - 1])
        if (abs(r - s) <= gap) return false;
  }
  return true;
}

}  // namespace detail

template <class S>
RootCoordinates<MpComplex> root_coordinates(const SchubertPoint<S>& x) {
  return RootCoordinates<MpComplex>(detail::root_levels(x));
}

// Exact domain: square-free y_a and coprime consecutive pairs.  Float
// domain: the computed roots are pairwise separated by tol relative to the
// root scale.
inline bool is_generic(const SchubertPoint<Rational>& x) {
  auto ys = y_polynomials(x);
  for (std::size_t a = 0; a < ys.size(); ++a) {
    if (ys[a].degree() > 0 &&
        gcd(ys[a], ys[a].derivative()).degree() > 0)
      return false;
    if (a > 0 && gcd(ys[a - 1], ys[a]).degree() > 0) return false;
  }
  return true;
}

inline bool is_generic(const SchubertPoint<MpComplex>& x, double tol = 1e-9) {
  return detail::levels_generic(detail::root_levels(x), tol);
}

// Max residual of the stationarity equations tied to levels 1..N-1; the
// base level enters only through its interaction term.
template <class S>
typename scalar_traits<S>::real_type bae_residual(
    const RootCoordinates<S>& t) {
  using ST = scalar_traits<S>;
  typename ST::real_type worst{};
  int n = t.rank();
  auto inv = [](const S& d) -> S {
    if (scalar_traits<S>::is_zero(d))
      throw compute_error("non-generic input");
    return S(1) / d;
  };
  for (int a = 1; a <= n - 1; ++a) {
    const auto& cur = t.level[a];
    const auto& below = t.level[a - 1];
    for (std::size_t j = 0; j < cur.size(); ++j) {
      S acc(0);
      for (const auto& s : below) acc += inv(cur[j] - s);
      for (std::size_t j2 = 0; j2 < cur.size(); ++j2)
        if (j2 != j) acc -= S(2) * inv(cur[j] - cur[j2]);
      if (a + 1 <= n - 1)
        for (const auto& s : t.level[a + 1]) acc += inv(cur[j] - s);
      auto mag = ST::abs(acc);
      if (mag > worst) worst = mag;
    }
  }
  return worst;
}

// D = (dd - chi_1)...(dd - chi_N) with chi_a the logarithmic difference of
// the levels a-1 and a (level N being empty).
template <class S>
ScalarDiffOp<S> chi_operator(const RootCoordinates<S>& t) {
  int n = t.rank();
  std::vector<RationalFunction<S>> chi;
  for (int a = 1; a <= n; ++a) {
    RationalFunction<S> f;
    for (const auto& r : t.level[a - 1])
      f += RationalFunction<S>(Polynomial<S>(1L), Polynomial<S>({-r, S(1)}));
    if (a <= n - 1)
      for (const auto& r : t.level[a])
        f -= RationalFunction<S>(Polynomial<S>(1L), Polynomial<S>({-r, S(1)}));
    chi.push_back(std::move(f));
  }
  return from_factors(chi);
}

namespace detail {

// Determinant of a small matrix of polynomials by first-row expansion.
template <class S>
Polynomial<S> poly_det(const std::vector<std::vector<Polynomial<S>>>& m,
                       std::size_t row, std::vector<std::size_t>& cols) {
  if (cols.empty()) return Polynomial<S>(1L);
  Polynomial<S> acc;
  for (std::size_t p = 0; p < cols.size(); ++p) {
    if (m[row][cols[p]].is_zero()) continue;
    std::vector<std::size_t> rest;
    rest.reserve(cols.size() - 1);
    for (std::size_t q = 0; q < cols.size(); ++q)
      if (q != p) rest.push_back(cols[q]);
    Polynomial<S> term = m[row][cols[p]] * poly_det(m, row + 1, rest);
    if (p % 2) acc -= term;
    else acc += term;
  }
  return acc;
}

}  // namespace detail

// The monic operator annihilating the flag: coefficients are signed ratios
// of the bordered Wronskian's minors to the plain Wronskian.
template <class S>
ScalarDiffOp<S> operator_from_kernel(const SchubertPoint<S>& x) {
  int n = x.rank();
  // ders[i][m] = f_i^{(m)}, m = 0..N
  std::vector<std::vector<Polynomial<S>>> ders(n);
  for (int i = 0; i < n; ++i) {
    ders[i].push_back(x.flag()[i]);
    for (int m = 1; m <= n; ++m)
      ders[i].push_back(ders[i].back().derivative());
  }
  std::vector<Polynomial<S>> minors;
  for (int j = 0; j <= n; ++j) {
    std::vector<std::size_t> cols;
    for (int m = 0; m <= n; ++m)
      if (m != j) cols.push_back(static_cast<std::size_t>(m));
    minors.push_back(detail::poly_det(ders, 0, cols));
  }
  std::vector<RationalFunction<S>> c;
  for (int j = 0; j <= n; ++j) {
    Polynomial<S> num = minors[j];
    if ((n - j) % 2) num = -num;
    c.emplace_back(std::move(num), minors[n]);
  }
  return ScalarDiffOp<S>(std::move(c));
}

// Inverse of operator_from_kernel on valid points: the polynomial kernel,
// echelonized, with the degree set dictated by lambda.
template <class S>
SchubertPoint<S> kernel_to_point(
    const ScalarDiffOp<S>& d, const Partition& lambda,
    const typename scalar_traits<S>::real_type& rel_tol = {}) {
  int n = lambda.n_parts();
  if (d.order() != n)
    throw input_error("operator order does not match the partition length");
  long bound = lambda.part(0) + n - 1;
  std::vector<Polynomial<S>> kernel = polynomial_kernel(d, bound, rel_tol);
  if (static_cast<int>(kernel.size()) != n)
    throw input_error("operator kernel does not lie in the cell");
  const std::vector<long> want = lambda.degrees();
  for (int i = 0; i < n; ++i)
    if (kernel[i].degree() != want[i])
      throw input_error("operator kernel does not lie in the cell");
  return SchubertPoint<S>(lambda, std::move(kernel));
}

// A pencil through the base point: every free flag coefficient moves
// linearly in eps with a seeded integer rate.
struct CurveGerm {
  SchubertPoint<MpComplex> base;
  std::vector<Polynomial<MpComplex>> direction;  // one row per flag row
  std::uint64_t seed = 0;

  SchubertPoint<MpComplex> at(const MpComplex& eps) const {
    std::vector<Polynomial<MpComplex>> basis;
    for (std::size_t i = 0; i < direction.size(); ++i)
      basis.push_back(base.flag()[i] + direction[i] * eps);
    return SchubertPoint<MpComplex>(base.shape(), std::move(basis),
                                    base.ambient());
  }
};

struct CurveSamples {
  CurveGerm germ;
  std::vector<MpReal> eps;
  std::vector<RootCoordinates<MpComplex>> roots;
};

inline std::vector<MpReal> default_eps_schedule(int steps = 25,
                                                double eps0 = 1e-2,
                                                double ratio = 0.5) {
  std::vector<MpReal> out;
  MpReal e(eps0);
  for (int m = 0; m < steps; ++m) {
    out.push_back(e);
    e = e * MpReal(ratio);
  }
  return out;
}

namespace detail {

// Reorders next so that entry p is the unmatched element closest to
// prev[p]; trajectories stay labeled consistently along the schedule.
inline std::vector<MpComplex> match_to(const std::vector<MpComplex>& prev,
                                       std::vector<MpComplex> next) {
  std::vector<MpComplex> out;
  std::vector<bool> used(next.size(), false);
  for (const auto& target : prev) {
    int best = -1;
    MpReal best_d;
    for (std::size_t q = 0; q < next.size(); ++q) {
      if (used[q]) continue;
      MpReal dist = abs(next[q] - target);
      if (best < 0 || dist < best_d) {
        best = static_cast<int>(q);
        best_d = dist;
      }
    }
    used[best] = true;
    out.push_back(next[best]);
  }
  return out;
}

}  // namespace detail

// Samples a generic pencil through x0 along the schedule, resampling the
// direction (up to 10 draws) until every sampled point is generic.  The
// base-level roots are grouped by proximity to b (group sizes ns) at the
// smallest eps and all levels are tracked continuously back up the
// schedule, so roots[m].level[0] lists first the n_1 roots converging to
// b_1, then the n_2 converging to b_2, and so on.
inline CurveSamples sample_curve(const SchubertPoint<MpComplex>& x0,
                                 const std::vector<MpComplex>& b,
                                 const std::vector<long>& ns,
                                 std::uint64_t seed,
                                 std::vector<MpReal> schedule = {},
                                 double gen_tol = 1e-9) {
  if (b.size() != ns.size())
    throw input_error("one multiplicity per target point required");
  long n_total = 0;
  for (long m : ns) {
    if (m < 1) throw input_error("group sizes must be positive");
    n_total += m;
  }
  if (n_total != x0.shape().weight())
    throw input_error("group sizes must sum to the partition weight");
  if (schedule.empty()) schedule = default_eps_schedule();

  // Free positions: row i, degree d_i - j not among the leading degrees.
  int n = x0.rank();
  std::vector<std::pair<int, long>> free_pos;
  for (int i = 0; i < n; ++i) {
    long di = x0.degrees()[i];
    for (long j = 1; j <= di; ++j) {
      long deg = di - j;
      if (std::find(x0.degrees().begin(), x0.degrees().end(), deg) ==
          x0.degrees().end())
        free_pos.emplace_back(i, deg);
    }
  }

  std::vector<std::vector<std::vector<MpComplex>>> levels_at;
  std::optional<CurveGerm> germ;
  for (std::uint64_t attempt = 0; attempt < 10 && !germ; ++attempt) {
    Rng rng(Rng::mix(seed, attempt));
    std::vector<Polynomial<MpComplex>> dir(n);
    bool all_zero = true;
    for (const auto& [row, deg] : free_pos) {
      long c = rng.uniform(-10, 10);
      if (c != 0) all_zero = false;
      dir[row] += Polynomial<MpComplex>::monomial(static_cast<int>(deg),
                                                  MpComplex(c));
    }
    if (all_zero && !free_pos.empty()) continue;
    CurveGerm cand{x0, dir, seed};
    levels_at.clear();
    bool ok = true;
    for (const auto& e : schedule) {
      auto lv = detail::root_levels(cand.at(MpComplex(e)));
      if (!detail::levels_generic(lv, gen_tol)) {
        ok = false;
        break;
      }
      levels_at.push_back(std::move(lv));
    }
    if (ok) germ = std::move(cand);
  }
  if (!germ)
    throw compute_error("no generic curve direction found; reseed");

  // Group the base level at the smallest eps; the radius is half the
  // minimal pairwise distance among the targets.
  MpReal radius;
  bool bounded = false;
  for (std::size_t s = 0; s < b.size(); ++s)
    for (std::size_t t = s + 1; t < b.size(); ++t) {
      MpReal d = abs(b[s] - b[t]) / MpReal(2L);
      if (!bounded || d < radius) {
        radius = d;
        bounded = true;
      }
    }
  auto& anchor = levels_at.back();
  std::vector<std::vector<MpComplex>> groups(b.size());
  for (const auto& r : anchor[0]) {
    int best = 0;
    MpReal best_d = abs(r - b[0]);
    for (std::size_t s = 1; s < b.size(); ++s) {
      MpReal d = abs(r - b[s]);
      if (d < best_d) {
        best = static_cast<int>(s);
        best_d = d;
      }
    }
    if (bounded && best_d > radius)
      throw compute_error("degeneration mismatch");
    groups[best].push_back(r);
  }
  for (std::size_t s = 0; s < groups.size(); ++s)
    if (static_cast<long>(groups[s].size()) != ns[s])
      throw compute_error("degeneration mismatch");
  std::vector<MpComplex> ordered0;
  for (std::size_t s = 0; s < groups.size(); ++s) {
    std::sort(groups[s].begin(), groups[s].end(),
              [&](const MpComplex& p, const MpComplex& q) {
                MpReal dp = abs(p - b[s]), dq = abs(q - b[s]);
                if (dp < dq) return true;
                if (dq < dp) return false;
                return arg(p - b[s]) < arg(q - b[s]);
              });
    for (const auto& r : groups[s]) ordered0.push_back(r);
  }
  anchor[0] = ordered0;

  // Propagate the anchor's ordering up the schedule.
  for (std::size_t m = levels_at.size() - 1; m-- > 0;)
    for (std::size_t a = 0; a < levels_at[m].size(); ++a)
      levels_at[m][a] =
          detail::match_to(levels_at[m + 1][a], std::move(levels_at[m][a]));

  std::vector<RootCoordinates<MpComplex>> roots;
  for (auto& lv : levels_at) roots.emplace_back(std::move(lv));
  return CurveSamples{std::move(*germ), std::move(schedule), std::move(roots)};
}

}  // namespace gaudin

#endif
