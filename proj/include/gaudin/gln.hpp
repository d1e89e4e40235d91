#ifndef GAUDIN_GLN_HPP
#define GAUDIN_GLN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gaudin/eigen_support.hpp"
#include "gaudin/linalg.hpp"
#include "gaudin/partition.hpp"

namespace gaudin {

// V^{tensor n} for gl_N with evaluation points z_1..z_n, one per factor.
// Basis vectors are indexed by tuples J = (j_1..j_n), 1 <= j_s <= N, in
// lexicographic order with j_1 most significant: index 0 is (1,...,1).
template <class S>
class ModuleSpace {
 public:
  ModuleSpace(int rank, std::vector<S> points)
      : n_(static_cast<int>(points.size())), rank_(rank),
        z_(std::move(points)) {
    if (rank_ < 1) throw input_error("rank must be at least 1");
    dim_ = 1;
    for (int s = 0; s < n_; ++s) dim_ *= rank_;
  }

  int rank() const { return rank_; }
  int degree() const { return n_; }
  long dim() const { return dim_; }
  const std::vector<S>& points() const { return z_; }

  long index_of(const std::vector<int>& tuple) const {
    if (static_cast<int>(tuple.size()) != n_)
      throw std::invalid_argument("tuple length != tensor degree");
    long idx = 0;
    for (int s = 0; s < n_; ++s) {
      if (tuple[s] < 1 || tuple[s] > rank_)
        throw std::invalid_argument("tuple entry out of range");
      idx = idx * rank_ + (tuple[s] - 1);
    }
    return idx;
  }

  std::vector<int> tuple_of(long idx) const {
    if (idx < 0 || idx >= dim_) throw std::invalid_argument("index out of range");
    std::vector<int> t(n_);
    for (int s = n_ - 1; s >= 0; --s) {
      t[s] = static_cast<int>(idx % rank_) + 1;
      idx /= rank_;
    }
    return t;
  }

  // m_i = #{s : j_s = i}.
  std::vector<long> weight_of(long idx) const {
    std::vector<long> m(rank_, 0);
    for (int j : tuple_of(idx)) ++m[j - 1];
    return m;
  }

  // All basis indices of a given weight, ascending.
  std::vector<long> weight_indices(const std::vector<long>& m) const {
    std::vector<long> out;
    for (long idx = 0; idx < dim_; ++idx)
      if (weight_of(idx) == m) out.push_back(idx);
    return out;
  }

  // Action of e_{ij} tensor t^m: sum over factors s of z_s^m times the
  // elementary-matrix action on slot s.
  VecX<S> act_eij(int i, int j, long m, const VecX<S>& v) const {
    if (i < 1 || i > rank_ || j < 1 || j > rank_)
      throw std::invalid_argument("generator index out of range");
    if (m < 0) throw std::invalid_argument("negative current power");
    if (v.size() != dim_) throw std::invalid_argument("vector dimension mismatch");
    std::vector<S> zm(n_);
    for (int s = 0; s < n_; ++s) {
      S p(1);
      for (long e = 0; e < m; ++e) p *= z_[s];
      zm[s] = p;
    }
    VecX<S> out = VecX<S>::Zero(dim_);
    std::vector<long> stride(n_);
    long st = 1;
    for (int s = n_ - 1; s >= 0; --s) {
      stride[s] = st;
      st *= rank_;
    }
    for (long idx = 0; idx < dim_; ++idx) {
      if (scalar_traits<S>::is_zero(v[idx])) continue;
      for (int s = 0; s < n_; ++s) {
        int js = static_cast<int>(idx / stride[s]) % rank_ + 1;
        if (js == j)
          out[idx + static_cast<long>(i - j) * stride[s]] += zm[s] * v[idx];
      }
    }
    return out;
  }

  // Matrix of e_{ij} tensor t^m in the basis above.
  MatX<S> matrix_eij(int i, int j, long m) const {
    MatX<S> out = MatX<S>::Zero(dim_, dim_);
    VecX<S> e = VecX<S>::Zero(dim_);
    for (long c = 0; c < dim_; ++c) {
      e[c] = S(1);
      out.col(c) = act_eij(i, j, m, e);
      e[c] = S(0);
    }
    return out;
  }

 private:
  int n_;
  int rank_;
  long dim_;
  std::vector<S> z_;
};

// All tuples J with #{s : j_s > i} = l_i for i = 1..N-1, where N = l.size()+1,
// in lexicographic order.  Equivalently the tuples of content m_i = l_{i-1} -
// l_i (l_0 = n, l_N = 0); an inconsistent l yields the empty list.
inline std::vector<std::vector<int>> admissible_indices(
    int n, const std::vector<long>& l) {
  int rank = static_cast<int>(l.size()) + 1;
  std::vector<long> m(rank);
  long prev = n;
  for (int i = 0; i < rank - 1; ++i) {
    if (l[i] < 0 || l[i] > n) return {};
    m[i] = prev - l[i];
    if (m[i] < 0) return {};
    prev = l[i];
  }
  m[rank - 1] = prev;
  std::vector<int> tuple;
  for (int i = 0; i < rank; ++i)
    tuple.insert(tuple.end(), m[i], i + 1);
  std::vector<std::vector<int>> out;
  if (tuple.empty()) {
    if (n == 0) out.push_back({});
    return out;
  }
  do {
    out.push_back(tuple);
  } while (std::next_permutation(tuple.begin(), tuple.end()));
  return out;
}

// Echelon basis of the singular vectors of weight lambda: joint kernel of
// every raising generator e_{ij}, i < j, inside the weight subspace.  A
// weight mismatch (|lambda| != n) has no such subspace and yields the empty
// list.  Vectors are returned in full tensor-product coordinates.
template <class S>
std::vector<VecX<S>> singular_basis(
    const ModuleSpace<S>& space, const Partition& lambda,
    const typename scalar_traits<S>::real_type& rel_tol = {}) {
  int rank = space.rank();
  if (lambda.n_parts() != rank)
    throw input_error("partition size must equal the rank");
  if (lambda.weight() != space.degree()) return {};
  std::vector<long> support = space.weight_indices(lambda.parts());
  long w = static_cast<long>(support.size());
  if (w == 0) return {};

  std::vector<MatX<S>> blocks;
  long rows = 0;
  for (int i = 1; i <= rank; ++i)
    for (int j = i + 1; j <= rank; ++j) {
      MatX<S> block(space.dim(), w);
      VecX<S> e = VecX<S>::Zero(space.dim());
      for (long c = 0; c < w; ++c) {
        e[support[c]] = S(1);
        block.col(c) = space.act_eij(i, j, 0, e);
        e[support[c]] = S(0);
      }
      rows += space.dim();
      blocks.push_back(std::move(block));
    }
  MatX<S> stacked(rows, w);
  long r0 = 0;
  for (const auto& b : blocks) {
    stacked.middleRows(r0, b.rows()) = b;
    r0 += b.rows();
  }
  MatX<S> ns = nullspace<S>(stacked, rel_tol);
  std::vector<VecX<S>> out;
  for (Eigen::Index c = 0; c < ns.cols(); ++c) {
    VecX<S> v = VecX<S>::Zero(space.dim());
    for (long r = 0; r < w; ++r) v[support[r]] = ns(r, c);
    out.push_back(std::move(v));
  }
  return out;
}

// Dimension of the irreducible with highest weight lambda:
// prod_{i<j} (lambda_i - lambda_j + j - i) / (j - i).
inline long weyl_dim(const Partition& lambda) {
  long num = 1, den = 1;
  int rank = lambda.n_parts();
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) {
      num *= lambda.part(i) - lambda.part(j) + j - i;
      den *= j - i;
    }
  return num / den;
}

// Per-factor orthogonal projections F_s of V^{tensor n_s} onto a copy of the
// irreducible L_{lambda^{(s)}} realized as the cyclic span of a seeded
// singular vector.
struct Epimorphism {
  int rank = 0;
  std::vector<long> ns;
  std::vector<Partition> lambdas;
  std::vector<MatX<Rational>> factors;
  std::uint64_t seed = 0;
};

// The cyclic span is generated by repeated lowering; orthogonal projection
// onto it commutes with every e_{ij} because the standard-coordinate adjoint
// of e_{ij} is e_{ji} and the span is invariant under both.
inline Epimorphism build_epimorphism(int rank,
                                     const std::vector<Partition>& lambdas,
                                     const std::vector<long>& ns,
                                     std::uint64_t seed) {
  if (lambdas.size() != ns.size())
    throw input_error("one partition per tensor factor required");
  Epimorphism f;
  f.rank = rank;
  f.ns = ns;
  f.lambdas = lambdas;
  f.seed = seed;
  for (std::size_t s = 0; s < ns.size(); ++s) {
    if (lambdas[s].weight() != ns[s])
      throw input_error("factor " + std::to_string(s) +
                        ": partition weight must equal the tensor degree");
    ModuleSpace<Rational> space(rank,
                                std::vector<Rational>(ns[s], Rational(0)));
    auto sing = singular_basis(space, lambdas[s]);
    if (sing.empty())
      throw input_error("factor " + std::to_string(s) +
                        ": no singular vector of this weight");
    Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(s)));
    VecX<Rational> u = VecX<Rational>::Zero(space.dim());
    for (const auto& v : sing) u += Rational(rng.nonzero(9)) * v;

    // Closure under lowering operators, sifted through a growing echelon.
    MatX<Rational> basis(space.dim(), 0);
    std::vector<VecX<Rational>> queue{u};
    auto sift = [&](const VecX<Rational>& v) -> bool {
      MatX<Rational> aug(space.dim(), basis.cols() + 1);
      if (basis.cols() > 0) aug.leftCols(basis.cols()) = basis;
      aug.col(basis.cols()) = v;
      if (gaudin::rank<Rational>(aug) == basis.cols()) return false;
      basis = std::move(aug);
      return true;
    };
    sift(u);
    while (!queue.empty()) {
      VecX<Rational> v = std::move(queue.back());
      queue.pop_back();
      for (int i = 2; i <= rank; ++i)
        for (int j = 1; j < i; ++j) {
          VecX<Rational> w = space.act_eij(i, j, 0, v);
          if (max_norm(w) == 0) continue;
          if (sift(w)) queue.push_back(std::move(w));
        }
      if (basis.cols() > space.dim())
        throw compute_error("module closure exceeded the ambient dimension");
    }
    if (basis.cols() != weyl_dim(lambdas[s]))
      throw compute_error("cyclic span dimension disagrees with the rank formula");
    MatX<Rational> proj = orthogonal_projector<Rational>(basis);
    for (int i = 1; i <= rank; ++i)
      for (int j = 1; j <= rank; ++j) {
        if (i == j) continue;
        MatX<Rational> e = space.matrix_eij(i, j, 0);
        if (max_norm(MatX<Rational>(proj * e - e * proj)) != 0)
          throw compute_error("projector fails to commute with the action");
      }
    f.factors.push_back(std::move(proj));
  }
  return f;
}

// (F_1 tensor ... tensor F_k) v on V^{tensor n}, n = sum n_s, factor s
// acting on its contiguous slot block.
template <class S>
VecX<S> apply_F(const Epimorphism& f, const VecX<S>& v) {
  long n = 0;
  for (long m : f.ns) n += m;
  long dim = 1;
  for (long s = 0; s < n; ++s) dim *= f.rank;
  if (v.size() != dim)
    throw std::invalid_argument("vector dimension mismatch");
  VecX<S> cur = v;
  long trailing = dim;
  for (std::size_t s = 0; s < f.ns.size(); ++s) {
    long group = 1;
    for (long m = 0; m < f.ns[s]; ++m) group *= f.rank;
    trailing /= group;
    long leading = dim / (group * trailing);
    MatX<S> m(f.factors[s].rows(), f.factors[s].cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        m(r, c) = scalar_traits<S>::from_rational(f.factors[s](r, c));
    VecX<S> next = VecX<S>::Zero(dim);
    for (long a = 0; a < leading; ++a)
      for (long c = 0; c < trailing; ++c) {
        long base = a * group * trailing + c;
        for (long bp = 0; bp < group; ++bp) {
          S acc(0);
          for (long b = 0; b < group; ++b)
            if (!scalar_traits<S>::is_zero(cur[base + b * trailing]))
              acc += m(bp, b) * cur[base + b * trailing];
          next[base + bp * trailing] = acc;
        }
      }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace gaudin

#endif
