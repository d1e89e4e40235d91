#ifndef GAUDIN_BETHE_HPP
#define GAUDIN_BETHE_HPP

#include <functional>
#include <optional>

#include "gaudin/diffop.hpp"
#include "gaudin/gln.hpp"
#include "gaudin/matrix_diffop.hpp"
#include "gaudin/roots.hpp"
#include "gaudin/weight_function.hpp"

namespace gaudin {

namespace detail {

template <class S>
std::vector<S> distinct_points(const std::vector<S>& z) {
  std::vector<S> out;
  for (const auto& p : z) {
    bool seen = false;
    for (const auto& q : out)
      if (scalar_traits<S>::is_zero(p - q)) seen = true;
    if (!seen) out.push_back(p);
  }
  return out;
}

// Deterministic real sample points clear of every pole: integers starting
// just beyond the magnitude of the largest evaluation point.
template <class S>
std::vector<S> off_pole_samples(const std::vector<S>& z, int count) {
  double bound = 0;
  for (const auto& p : z)
    bound = std::max(
        bound, scalar_traits<S>::to_double(scalar_traits<S>::abs(p)));
  long start = static_cast<long>(bound) + 2;
  std::vector<S> out;
  for (int r = 0; r < count; ++r)
    out.push_back(scalar_traits<S>::from_int(start + r));
  return out;
}

}  // namespace detail

// e_{ij}(u) = sum_s e_{ij}^{(s)} / (u - z_s), assembled over the product of
// the distinct pole factors.
template <class S>
MatRatFun<S> current_rational(const ModuleSpace<S>& space, int i, int j) {
  std::vector<S> zs = detail::distinct_points(space.points());
  if (zs.empty()) return MatRatFun<S>(space.dim());
  Polynomial<S> den = from_roots(zs);
  // Residue at zeta_c is e_{ij} twisted by the indicator of that group; the
  // numerator is sum_c residue_c * prod_{c' != c} (u - zeta_{c'}).  The
  // group action is realized through a degree-0 twist: act only on slots
  // with z_s = zeta_c.
  std::vector<MatX<S>> num(zs.size(), MatX<S>::Zero(space.dim(), space.dim()));
  for (std::size_t c = 0; c < zs.size(); ++c) {
    // Matrix of sum_{s: z_s = zeta_c} e_{ij}^{(s)}: build from unit vectors.
    MatX<S> res = MatX<S>::Zero(space.dim(), space.dim());
    {
      std::vector<long> stride(space.degree());
      long st = 1;
      for (int s = space.degree() - 1; s >= 0; --s) {
        stride[s] = st;
        st *= space.rank();
      }
      for (long col = 0; col < space.dim(); ++col) {
        auto tuple = space.tuple_of(col);
        for (int s = 0; s < space.degree(); ++s) {
          if (!scalar_traits<S>::is_zero(space.points()[s] - zs[c])) continue;
          if (tuple[s] == j)
            res(col + static_cast<long>(i - j) * stride[s], col) += S(1);
        }
      }
    }
    Polynomial<S> rest(1L);
    for (std::size_t cc = 0; cc < zs.size(); ++cc)
      if (cc != c) rest *= Polynomial<S>({-zs[cc], S(1)});
    for (int d = 0; d <= rest.degree(); ++d) num[d] += res * rest[d];
  }
  return MatRatFun<S>(std::move(num), std::move(den));
}

// Row determinant of (dd delta_ij - e_{ji}(u)) over the full module, by
// first-row expansion with memoization on the used-column mask.
template <class S>
MatrixDiffOp<S> raw_universal_operator(const ModuleSpace<S>& space,
                                       int max_rank = 4) {
  int n = space.rank();
  if (n > max_rank)
    throw input_error("rank exceeds the expansion cap (override to proceed)");
  long dim = space.dim();
  std::vector<std::vector<MatrixDiffOp<S>>> entry;
  for (int r = 0; r < n; ++r) {
    std::vector<MatrixDiffOp<S>> row;
    for (int c = 0; c < n; ++c) {
      // Entry (r, c) is dd delta_{rc} - e_{c+1, r+1}(u).
      MatRatFun<S> cur = current_rational(space, c + 1, r + 1) * S(-1);
      std::vector<MatRatFun<S>> coeffs{cur};
      if (r == c) coeffs.push_back(MatRatFun<S>::identity(dim));
      row.emplace_back(dim, std::move(coeffs));
    }
    entry.push_back(std::move(row));
  }
  std::vector<std::optional<MatrixDiffOp<S>>> memo(1u << n);
  std::function<const MatrixDiffOp<S>&(unsigned)> rec =
      [&](unsigned mask) -> const MatrixDiffOp<S>& {
    if (memo[mask]) return *memo[mask];
    int row = __builtin_popcount(mask);
    if (row == n) {
      memo[mask] = MatrixDiffOp<S>::identity(dim);
      return *memo[mask];
    }
    std::optional<MatrixDiffOp<S>> acc;
    int sign = 1;
    for (int c = 0; c < n; ++c) {
      if (mask & (1u << c)) continue;
      MatrixDiffOp<S> term = compose(entry[row][c], rec(mask | (1u << c)));
      if (sign < 0) {
        term = MatrixDiffOp<S>(dim, {MatRatFun<S>(dim)}) - term;
      }
      acc = acc ? (*acc + term) : term;
      sign = -sign;
    }
    memo[mask] = std::move(*acc);
    return *memo[mask];
  };
  return rec(0);
}

namespace detail {

// Images of a fixed block of columns under a matrix rational function:
// num[j] is the u^j coefficient of the product, over a shared monic
// denominator.  The rectangular counterpart of MatRatFun, carrying just the
// operations the restricted row-determinant expansion needs.
template <class S>
struct AppliedColumns {
  std::vector<MatX<S>> num;
  Polynomial<S> den{1L};

  bool is_zero() const { return num.empty(); }
};

template <class S>
void ac_trim(AppliedColumns<S>& a) {
  auto vanishes = [](const MatX<S>& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (!scalar_traits<S>::is_zero(m(i, j))) return false;
    return true;
  };
  while (!a.num.empty() && vanishes(a.num.back())) a.num.pop_back();
  if (a.num.empty()) {
    a.den = Polynomial<S>(1L);
    return;
  }
  S lead = a.den.leading();
  if (!(lead == S(1))) {
    for (auto& m : a.num) m /= lead;
    a.den = a.den / lead;
  }
}

template <class S>
AppliedColumns<S> ac_add(const AppliedColumns<S>& a,
                         const AppliedColumns<S>& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  AppliedColumns<S> out;
  auto cross = [&out](const AppliedColumns<S>& x, const Polynomial<S>& od) {
    for (std::size_t j = 0; j < x.num.size(); ++j)
      for (int k = 0; k <= od.degree(); ++k) {
        std::size_t p = j + k;
        while (out.num.size() <= p)
          out.num.push_back(
              MatX<S>::Zero(x.num[0].rows(), x.num[0].cols()));
        if (!scalar_traits<S>::is_zero(od[k])) out.num[p] += x.num[j] * od[k];
      }
  };
  cross(a, b.den);
  cross(b, a.den);
  out.den = a.den * b.den;
  ac_trim(out);
  return out;
}

template <class S>
AppliedColumns<S> ac_negate(AppliedColumns<S> a) {
  for (auto& m : a.num) m = -m;
  return a;
}

template <class S>
AppliedColumns<S> ac_derivative(const AppliedColumns<S>& a) {
  if (a.is_zero()) return a;
  AppliedColumns<S> first;  // n'/d
  for (std::size_t j = 1; j < a.num.size(); ++j)
    first.num.push_back(a.num[j] * S(static_cast<long>(j)));
  first.den = a.den;
  ac_trim(first);
  Polynomial<S> dp = a.den.derivative();
  if (dp.is_zero()) return first;
  AppliedColumns<S> second;  // -n d'/d^2
  for (std::size_t j = 0; j < a.num.size(); ++j)
    for (int k = 0; k <= dp.degree(); ++k) {
      std::size_t p = j + k;
      while (second.num.size() <= p)
        second.num.push_back(
            MatX<S>::Zero(a.num[0].rows(), a.num[0].cols()));
      if (!scalar_traits<S>::is_zero(dp[k])) second.num[p] -= a.num[j] * dp[k];
    }
  second.den = a.den * a.den;
  ac_trim(second);
  return ac_add(first, second);
}

// Square rational matrix times applied columns.  The left factors here are
// current matrices with a handful of nonzeros per row, so the product
// walks the nonzero entries instead of running a dense multiply.
template <class S>
AppliedColumns<S> ac_left_mul(const MatRatFun<S>& a,
                              const AppliedColumns<S>& b) {
  if (a.is_zero() || b.is_zero()) return AppliedColumns<S>{};
  AppliedColumns<S> out;
  Eigen::Index rows = a.num()[0].rows(), cols = b.num[0].cols();
  out.num.assign(a.num().size() + b.num.size() - 1, MatX<S>::Zero(rows, cols));
  for (std::size_t i = 0; i < a.num().size(); ++i) {
    const MatX<S>& am = a.num()[i];
    for (std::size_t j = 0; j < b.num.size(); ++j) {
      const MatX<S>& bm = b.num[j];
      MatX<S>& dst = out.num[i + j];
      for (Eigen::Index mid = 0; mid < am.cols(); ++mid)
        for (Eigen::Index r = 0; r < rows; ++r) {
          if (scalar_traits<S>::is_zero(am(r, mid))) continue;
          for (Eigen::Index c = 0; c < cols; ++c)
            dst(r, c) += am(r, mid) * bm(mid, c);
        }
    }
  }
  out.den = a.den() * b.den;
  ac_trim(out);
  return out;
}

// Row-determinant coefficients applied to fixed columns: the same
// first-row expansion as raw_universal_operator, but every node carries
// only the images of the given columns, so the cost scales with their
// count rather than with the module dimension.
template <class S>
std::vector<AppliedColumns<S>> rdet_applied(const ModuleSpace<S>& space,
                                            const MatX<S>& basis,
                                            int max_rank) {
  int n = space.rank();
  if (n > max_rank)
    throw input_error("rank exceeds the expansion cap (override to proceed)");
  std::vector<std::vector<MatRatFun<S>>> cur(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      cur[r].push_back(current_rational(space, c + 1, r + 1) * S(-1));

  using Node = std::vector<AppliedColumns<S>>;  // per dd power
  std::vector<std::optional<Node>> memo(1u << n);
  std::function<const Node&(unsigned)> rec = [&](unsigned mask) -> const Node& {
    if (memo[mask]) return *memo[mask];
    int row = __builtin_popcount(mask);
    if (row == n) {
      Node base(1);
      base[0].num = {basis};
      memo[mask] = std::move(base);
      return *memo[mask];
    }
    std::optional<Node> acc;
    int sign = 1;
    for (int c = 0; c < n; ++c) {
      if (mask & (1u << c)) continue;
      const Node& tail = rec(mask | (1u << c));
      Node term(tail.size() + (row == c ? 1 : 0));
      for (std::size_t j = 0; j < tail.size(); ++j) {
        if (tail[j].is_zero()) continue;
        term[j] = ac_add(term[j], ac_left_mul(cur[row][c], tail[j]));
        if (row == c) {
          term[j] = ac_add(term[j], ac_derivative(tail[j]));
          term[j + 1] = ac_add(term[j + 1], tail[j]);
        }
      }
      if (sign < 0)
        for (auto& t : term) t = ac_negate(std::move(t));
      if (!acc) {
        acc = std::move(term);
      } else {
        if (acc->size() < term.size()) acc->resize(term.size());
        for (std::size_t j = 0; j < term.size(); ++j)
          (*acc)[j] = ac_add((*acc)[j], term[j]);
      }
      sign = -sign;
    }
    memo[mask] = std::move(*acc);
    return *memo[mask];
  };
  Node out = rec(0);
  out.resize(static_cast<std::size_t>(n) + 1);
  return out;
}

}  // namespace detail

// Compression of a coefficient action onto an invariant subspace: with B the
// basis, solves B X = M B through the pivot rows and verifies there is no
// leakage out of the span.
template <class S>
class SubspaceRestriction {
 public:
  SubspaceRestriction(const MatX<S>& basis,
                      const typename scalar_traits<S>::real_type& rel_tol)
      : basis_(basis), rel_tol_(rel_tol) {
    if (basis.cols() < 1) throw input_error("empty subspace basis");
    Echelon<S> e = rref<S>(MatX<S>(basis.transpose()), rel_tol);
    if (e.rank() != basis.cols())
      throw input_error("subspace basis is rank-deficient");
    pivot_rows_.assign(e.pivots.begin(), e.pivots.end());
    MatX<S> bp(basis.cols(), basis.cols());
    for (Eigen::Index k = 0; k < bp.rows(); ++k)
      bp.row(k) = basis.row(pivot_rows_[k]);
    MatX<S> aug(bp.rows(), 2 * bp.cols());
    aug.leftCols(bp.cols()) = bp;
    aug.rightCols(bp.cols()) = MatX<S>::Identity(bp.rows(), bp.cols());
    Echelon<S> inv = rref<S>(aug, rel_tol);
    if (inv.rank() != bp.rows())
      throw input_error("subspace basis is rank-deficient");
    bp_inv_ = inv.mat.rightCols(bp.cols());
  }

  // Solves B X = MB given the product MB directly.  The leak test is
  // relative to max(|MB|, scale_floor): callers restricting a polynomial
  // family pass the family-wide magnitude, since a coefficient that is pure
  // cancellation noise cannot be held to its own scale.
  MatX<S> compress(const MatX<S>& mb,
                   const typename scalar_traits<S>::real_type& scale_floor =
                       {}) const {
    typename scalar_traits<S>::real_type scale = max_norm(mb);
    if (scale < scale_floor) scale = scale_floor;
    MatX<S> rows(basis_.cols(), basis_.cols());
    for (Eigen::Index k = 0; k < rows.rows(); ++k)
      rows.row(k) = mb.row(pivot_rows_[k]);
    MatX<S> x = bp_inv_ * rows;
    MatX<S> leak = basis_ * x - mb;
    bool bad;
    if constexpr (scalar_traits<S>::is_exact)
      bad = max_norm(leak) != typename scalar_traits<S>::real_type(0);
    else
      bad = max_norm(leak) > rel_tol_ * scale;
    if (bad)
      throw input_error("subspace is not invariant under the operator");
    return x;
  }

  MatX<S> operator()(const MatX<S>& m) const { return compress(m * basis_); }

  MatRatFun<S> operator()(const MatRatFun<S>& m) const {
    if (m.is_zero()) return MatRatFun<S>(basis_.cols());
    std::vector<MatX<S>> prods;
    for (const auto& mat : m.num()) prods.emplace_back(mat * basis_);
    typename scalar_traits<S>::real_type family = family_scale(prods);
    std::vector<MatX<S>> num;
    for (const auto& p : prods) num.push_back(compress(p, family));
    return MatRatFun<S>(std::move(num), m.den());
  }

  MatRatFun<S> from_applied(const detail::AppliedColumns<S>& mb) const {
    if (mb.is_zero()) return MatRatFun<S>(basis_.cols());
    typename scalar_traits<S>::real_type family = family_scale(mb.num);
    std::vector<MatX<S>> num;
    for (const auto& mat : mb.num) num.push_back(compress(mat, family));
    return MatRatFun<S>(std::move(num), mb.den);
  }

 private:
  static typename scalar_traits<S>::real_type family_scale(
      const std::vector<MatX<S>>& mats) {
    typename scalar_traits<S>::real_type top{};
    for (const auto& m : mats) {
      typename scalar_traits<S>::real_type s = max_norm(m);
      if (top < s) top = s;
    }
    return top;
  }

  MatX<S> basis_;
  typename scalar_traits<S>::real_type rel_tol_;
  std::vector<int> pivot_rows_;
  MatX<S> bp_inv_;
};

template <class S>
struct UniversalOperator {
  ModuleSpace<S> space;
  MatX<S> basis;       // columns: subspace basis in module coordinates
  MatrixDiffOp<S> op;  // restricted row determinant, leading identity

  int order() const { return op.order(); }
  Eigen::Index subspace_dim() const { return basis.cols(); }
  // Coefficient operator of dd^{order-i}, i = 1..order.
  const MatRatFun<S>& B(int i) const { return op.coeff(op.order() - i); }
  VecX<S> full_vector(const VecX<S>& sub) const { return basis * sub; }
};

template <class S>
UniversalOperator<S> universal_operator(
    const ModuleSpace<S>& space, const MatX<S>& basis,
    const typename scalar_traits<S>::real_type& rel_tol = {},
    int max_rank = 4) {
  if (basis.rows() != space.dim())
    throw input_error("subspace basis does not match the module dimension");
  SubspaceRestriction<S> restrict(basis, rel_tol);
  auto applied = detail::rdet_applied(space, basis, max_rank);
  std::vector<MatRatFun<S>> coeffs;
  for (const auto& mb : applied) coeffs.push_back(restrict.from_applied(mb));
  return UniversalOperator<S>{space, basis,
                              MatrixDiffOp<S>(basis.cols(), std::move(coeffs))};
}

template <class S>
struct EigenReport {
  VecX<S> v;  // subspace coordinates, largest component pinned to 1
  std::vector<RationalFunction<S>> h;  // h_1..h_N
  ScalarDiffOp<S> op;                  // dd^N + sum h_i dd^{N-i}
  typename scalar_traits<S>::real_type residual{};
  bool pass = false;
  bool degenerate = false;
  int multiplicity = 1;
};

namespace detail {

template <class S>
Eigen::Index largest_component(const VecX<S>& v) {
  Eigen::Index best = 0;
  auto best_mag = scalar_traits<S>::abs(v[0]);
  for (Eigen::Index k = 1; k < v.size(); ++k) {
    auto mag = scalar_traits<S>::abs(v[k]);
    if (mag > best_mag) {
      best = k;
      best_mag = mag;
    }
  }
  return best;
}

// B_i applied to a constant vector, componentwise over the shared
// denominator.
template <class S>
std::vector<RationalFunction<S>> apply_constant(const MatRatFun<S>& m,
                                                const VecX<S>& v) {
  std::vector<RationalFunction<S>> out(v.size());
  if (m.is_zero()) return out;
  for (Eigen::Index r = 0; r < v.size(); ++r) {
    std::vector<S> coeffs;
    for (const auto& mat : m.num()) {
      S acc(0);
      for (Eigen::Index c = 0; c < v.size(); ++c)
        if (!scalar_traits<S>::is_zero(v[c])) acc += mat(r, c) * v[c];
      coeffs.push_back(acc);
    }
    Polynomial<S> num(std::move(coeffs));
    if (!num.is_zero()) out[r] = RationalFunction<S>(std::move(num), m.den());
  }
  return out;
}

}  // namespace detail

// h_i extraction and residual test for a candidate eigenvector given in
// subspace coordinates.  The exact domain reads h_i off as the component
// ratio at the largest entry; the floating domain fits the numerator over
// the fixed denominator prod_zeta (u - zeta)^i by least squares.
template <class S>
EigenReport<S> eigen_check(const UniversalOperator<S>& u, const VecX<S>& v,
                           double tolerance = 1e-8) {
  using ST = scalar_traits<S>;
  if (v.size() != u.subspace_dim())
    throw std::invalid_argument("vector size does not match the subspace");
  if (max_norm(v) == typename ST::real_type(0))
    throw std::invalid_argument("zero candidate vector");
  int n = u.order();
  EigenReport<S> rep;
  Eigen::Index j0 = detail::largest_component(v);
  rep.v = v / v[j0];

  std::vector<S> distinct = detail::distinct_points(u.space.points());
  long big_k = static_cast<long>(distinct.size());
  for (int i = 1; i <= n; ++i) {
    const MatRatFun<S>& bi = u.B(i);
    RationalFunction<S> hi;
    if (bi.is_zero() || big_k == 0) {
      rep.h.push_back(hi);
      continue;
    }
    if constexpr (ST::is_exact) {
      std::vector<RationalFunction<S>> bv = detail::apply_constant(bi, rep.v);
      hi = bv[j0];  // rep.v[j0] == 1
    } else {
      // Fit num with deg <= K i - i against samples of the component ratio.
      Polynomial<S> den(1L);
      for (const auto& zeta : distinct)
        for (int p = 0; p < i; ++p) den *= Polynomial<S>({-zeta, S(1)});
      long num_deg = big_k * i - i;
      int m = static_cast<int>(3 * (big_k * i + 1));
      auto samples = detail::off_pole_samples(u.space.points(), m);
      MatX<S> a(m, num_deg + 1);
      VecX<S> rhs(m);
      for (int r = 0; r < m; ++r) {
        const S& x = samples[r];
        S p(1);
        for (long c = 0; c <= num_deg; ++c) {
          a(r, c) = p;
          p *= x;
        }
        VecX<S> bx = bi.eval(x) * rep.v;
        rhs[r] = bx[j0] * den.eval(x);
      }
      VecX<S> sol = least_squares<S>(a, rhs, typename ST::real_type(0));
      std::vector<S> nc(sol.data(), sol.data() + sol.size());
      Polynomial<S> num = Polynomial<S>(std::move(nc))
                              .trimmed(max_norm(sol) *
                                       typename ST::real_type(1e-30));
      if (num.is_zero())
        hi = RationalFunction<S>();
      else
        hi = RationalFunction<S>(std::move(num), std::move(den));
    }
    rep.h.push_back(hi);
  }

  // Residual over deterministic sample points.
  auto samples = detail::off_pole_samples(u.space.points(), 10);
  typename ST::real_type res{};
  typename ST::real_type vnorm = max_norm(rep.v);
  for (const auto& x : samples) {
    for (int i = 1; i <= n; ++i) {
      const MatRatFun<S>& bi = u.B(i);
      VecX<S> bx = bi.is_zero()
                       ? VecX<S>(VecX<S>::Zero(rep.v.size()))
                       : VecX<S>(bi.eval(x) * rep.v);
      S hx = rep.h[i - 1].is_zero() ? S(0) : rep.h[i - 1].eval(x);
      VecX<S> diff = bx - hx * rep.v;
      auto norm = max_norm(diff);
      if (norm > res) res = norm;
    }
  }
  rep.residual = res / vnorm;
  if constexpr (ST::is_exact)
    rep.pass = (rep.residual == typename ST::real_type(0));
  else
    rep.pass = (rep.residual.to_double() <= tolerance);

  std::vector<RationalFunction<S>> c(n + 1);
  for (int i = 1; i <= n; ++i) c[n - i] = rep.h[i - 1];
  c[n] = RationalFunction<S>(1L);
  rep.op = ScalarDiffOp<S>(std::move(c));
  return rep;
}

namespace detail {

// Compression of m onto the column span of basis by least squares,
// X = (B^H B)^{-1} B^H m B.  Used during spectral refinement where the
// refined spaces are invariant only up to the working tolerance.
inline MatX<MpComplex> project_action(const MatX<MpComplex>& basis,
                                      const MatX<MpComplex>& m) {
  MatX<MpComplex> bh = adjoint_of(basis);
  MatX<MpComplex> g = bh * basis;
  MatX<MpComplex> rhs = bh * (m * basis);
  MatX<MpComplex> aug(g.rows(), g.cols() + rhs.cols());
  aug.leftCols(g.cols()) = g;
  aug.rightCols(rhs.cols()) = rhs;
  Echelon<MpComplex> e = rref<MpComplex>(aug);
  if (e.rank() < g.rows())
    throw compute_error("spectral refinement basis lost rank");
  return e.mat.rightCols(rhs.cols());
}

}  // namespace detail

// Simultaneous diagonalization of the commuting family {B_i(u_r)} on the
// restricted subspace: a seeded random combination is split first and every
// multi-dimensional eigenspace is refined with fresh combinations; what
// remains multi-dimensional after the retry budget is flagged degenerate.
inline std::vector<EigenReport<MpComplex>> spectrum(
    const UniversalOperator<MpComplex>& u, double tolerance = 1e-8,
    std::uint64_t seed = 1, double cluster_tol = 1e-8) {
  long r = u.subspace_dim();
  int n = u.order();
  auto samples = detail::off_pole_samples(u.space.points(), 3);
  std::vector<MatX<MpComplex>> family;
  for (int i = 1; i <= n; ++i)
    for (const auto& x : samples)
      family.push_back(u.B(i).is_zero()
                           ? MatX<MpComplex>(MatX<MpComplex>::Zero(r, r))
                           : u.B(i).eval(x));

  std::vector<EigenReport<MpComplex>> reports;
  std::function<void(const MatX<MpComplex>&, int)> split =
      [&](const MatX<MpComplex>& basis, int depth) {
        long m = basis.cols();
        if (m == 1) {
          VecX<MpComplex> v = basis.col(0);
          reports.push_back(eigen_check(u, v, tolerance));
          return;
        }
        if (depth > 4) {
          VecX<MpComplex> v = basis.col(0);
          EigenReport<MpComplex> rep = eigen_check(u, v, tolerance);
          rep.degenerate = true;
          rep.multiplicity = static_cast<int>(m);
          reports.push_back(std::move(rep));
          return;
        }
        Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(depth)));
        MatX<MpComplex> combo = MatX<MpComplex>::Zero(r, r);
        for (const auto& f : family)
          combo += MpComplex(MpReal(static_cast<long>(rng.uniform(-99, 99))) /
                                 MpReal(64L),
                             MpReal(static_cast<long>(rng.uniform(-99, 99))) /
                                 MpReal(64L)) *
                   f;
        MatX<MpComplex> a = detail::project_action(basis, combo);
        Polynomial<MpComplex> cp = charpoly<MpComplex>(a);
        std::vector<MpComplex> roots = poly_roots(cp, config::precision());
        MpReal scale(0L);
        for (const auto& rt : roots) {
          MpReal mag = abs(rt);
          if (mag > scale) scale = mag;
        }
        MpReal radius = scale * MpReal(cluster_tol);
        if (radius == MpReal(0L)) radius = MpReal(cluster_tol);
        auto clusters = cluster_by_distance(roots, radius);
        for (const auto& cluster : clusters) {
          MpComplex mu(0L);
          for (int idx : cluster) mu += roots[idx];
          mu = mu / MpComplex(static_cast<long>(cluster.size()));
          MatX<MpComplex> shifted = a;
          for (long d = 0; d < m; ++d) shifted(d, d) -= mu;
          MatX<MpComplex> ns = nullspace<MpComplex>(
              shifted, MpReal(cluster_tol) * MpReal(0.5));
          if (ns.cols() == 0) {
            // Numerically defective split: treat the whole cluster as one
            // degenerate space spanned by the best available vector.
            EigenReport<MpComplex> rep =
                eigen_check(u, VecX<MpComplex>(basis.col(0)), tolerance);
            rep.degenerate = true;
            rep.multiplicity = static_cast<int>(cluster.size());
            reports.push_back(std::move(rep));
            continue;
          }
          MatX<MpComplex> sub = basis * ns;
          if (ns.cols() == 1) {
            reports.push_back(
                eigen_check(u, VecX<MpComplex>(sub.col(0)), tolerance));
          } else {
            split(sub, depth + 1);
          }
        }
      };
  split(MatX<MpComplex>::Identity(r, r), 0);
  return reports;
}

// Max commutator norm over sampled pairs of coefficient evaluations and
// against every e_{kl} generator matrix, on the full module.
template <class S>
typename scalar_traits<S>::real_type commutativity_check(
    const ModuleSpace<S>& space, int n_samples = 3, int max_rank = 4) {
  MatrixDiffOp<S> raw = raw_universal_operator(space, max_rank);
  int n = space.rank();
  auto samples = detail::off_pole_samples(space.points(), n_samples);
  std::vector<MatX<S>> evals;
  for (int i = 1; i <= n; ++i)
    for (const auto& x : samples) {
      const MatRatFun<S>& bi = raw.coeff(raw.order() - i);
      evals.push_back(bi.is_zero()
                          ? MatX<S>(MatX<S>::Zero(space.dim(), space.dim()))
                          : bi.eval(x));
    }
  typename scalar_traits<S>::real_type worst{};
  for (std::size_t a = 0; a < evals.size(); ++a)
    for (std::size_t b = a + 1; b < evals.size(); ++b) {
      auto nrm = max_norm(MatX<S>(evals[a] * evals[b] - evals[b] * evals[a]));
      if (nrm > worst) worst = nrm;
    }
  for (int k = 1; k <= n; ++k)
    for (int l = 1; l <= n; ++l) {
      MatX<S> g = space.matrix_eij(k, l, 0);
      for (const auto& e : evals) {
        auto nrm = max_norm(MatX<S>(e * g - g * e));
        if (nrm > worst) worst = nrm;
      }
    }
  return worst;
}

template <class S2, class S1>
ModuleSpace<S2> convert_space(const ModuleSpace<S1>& s) {
  std::vector<S2> z;
  for (const auto& p : s.points()) z.push_back(S2(p));
  return ModuleSpace<S2>(s.rank(), std::move(z));
}

template <class S2, class S1>
UniversalOperator<S2> convert_universal(const UniversalOperator<S1>& u) {
  MatX<S2> basis(u.basis.rows(), u.basis.cols());
  for (Eigen::Index i = 0; i < basis.rows(); ++i)
    for (Eigen::Index j = 0; j < basis.cols(); ++j)
      basis(i, j) = S2(u.basis(i, j));
  return UniversalOperator<S2>{convert_space<S2>(u.space), std::move(basis),
                               convert_mdiffop<S2>(u.op)};
}

}  // namespace gaudin

#endif
