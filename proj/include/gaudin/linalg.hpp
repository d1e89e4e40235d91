#ifndef GAUDIN_LINALG_HPP
#define GAUDIN_LINALG_HPP

#include <vector>

#include "gaudin/eigen_support.hpp"
#include "gaudin/polynomial.hpp"

namespace gaudin {

template <class S>
struct Echelon {
  MatX<S> mat;              // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each nonzero row
  int rank() const { return static_cast<int>(pivots.size()); }
};

// Reduced row echelon form with largest-|entry| pivoting per column.
// Entries are treated as zero when their magnitude is at most rel_tol times
// the largest magnitude of the input matrix (exact domain: exactly zero).
template <class S>
Echelon<S> rref(MatX<S> a,
                const typename scalar_traits<S>::real_type& rel_tol = {}) {
  using ST = scalar_traits<S>;
  auto threshold = max_norm<S>(a) * rel_tol;
  Echelon<S> e;
  std::vector<int> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index best = -1;
    typename ST::real_type best_mag = ST::abs(S(0));
    for (Eigen::Index r = row; r < a.rows(); ++r) {
      auto mag = ST::abs(a(r, col));
      if (!ST::negligible(mag, threshold) && (best < 0 || mag > best_mag)) {
        best = r;
        best_mag = mag;
      }
    }
    if (best < 0) {
      for (Eigen::Index r = row; r < a.rows(); ++r) a(r, col) = S(0);
      continue;
    }
    if (best != row) a.row(best).swap(a.row(row));
    S inv = S(1) / a(row, col);
    a.row(row) *= inv;
    a(row, col) = S(1);
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == row) continue;
      if (ST::is_zero(a(r, col))) continue;
      S f = a(r, col);
      a.row(r) -= f * a.row(row);
      a(r, col) = S(0);
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  e.mat = std::move(a);
  e.pivots = std::move(pivots);
  return e;
}

template <class S>
int rank(const MatX<S>& a,
         const typename scalar_traits<S>::real_type& rel_tol = {}) {
  return rref<S>(a, rel_tol).rank();
}

// Basis of the right nullspace, one column per free variable, in ascending
// free-column order with the free coordinate set to 1.
template <class S>
MatX<S> nullspace(const MatX<S>& a,
                  const typename scalar_traits<S>::real_type& rel_tol = {}) {
  Echelon<S> e = rref<S>(a, rel_tol);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int p : e.pivots) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(static_cast<int>(c));
  MatX<S> basis = MatX<S>::Zero(a.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    int f = free_cols[k];
    basis(f, k) = S(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      basis(e.pivots[r], k) = -e.mat(r, f);
  }
  return basis;
}

// Solve Ax = b (one particular solution, free variables set to zero).
template <class S>
VecX<S> solve(const MatX<S>& a, const VecX<S>& b,
              const typename scalar_traits<S>::real_type& rel_tol = {}) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve: size mismatch");
  MatX<S> aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  Echelon<S> e = rref<S>(aug, rel_tol);
  VecX<S> x = VecX<S>::Zero(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == static_cast<int>(a.cols()))
      throw std::invalid_argument("solve: inconsistent linear system");
    x(e.pivots[r]) = e.mat(r, a.cols());
  }
  return x;
}

template <class S>
S det(MatX<S> a) {
  using ST = scalar_traits<S>;
  if (a.rows() != a.cols()) throw std::invalid_argument("det: not square");
  S result(1);
  for (Eigen::Index col = 0; col < a.cols(); ++col) {
    Eigen::Index best = -1;
    typename ST::real_type best_mag = ST::abs(S(0));
    for (Eigen::Index r = col; r < a.rows(); ++r) {
      auto mag = ST::abs(a(r, col));
      if (!ST::is_zero(a(r, col)) && (best < 0 || mag > best_mag)) {
        best = r;
        best_mag = mag;
      }
    }
    if (best < 0) return S(0);
    if (best != col) {
      a.row(best).swap(a.row(col));
      result = -result;
    }
    result *= a(col, col);
    for (Eigen::Index r = col + 1; r < a.rows(); ++r) {
      if (ST::is_zero(a(r, col))) continue;
      S f = a(r, col) / a(col, col);
      a.row(r) -= f * a.row(col);
    }
  }
  return result;
}

// Characteristic polynomial det(xI - A) by the Faddeev-LeVerrier
// recurrence; exact in the rational domain.
template <class S>
Polynomial<S> charpoly(const MatX<S>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("charpoly: not square");
  Eigen::Index n = a.rows();
  std::vector<S> c(n + 1, S(0));
  c[n] = S(1);
  MatX<S> m = MatX<S>::Zero(n, n);
  S ck(1);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m;
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) += ck;
    MatX<S> am = a * m;
    S tr(0);
    for (Eigen::Index i = 0; i < n; ++i) tr += am(i, i);
    ck = -tr / S(static_cast<long>(k));
    c[n - k] = ck;
  }
  return Polynomial<S>(std::move(c));
}

template <class S>
MatX<S> adjoint_of(const MatX<S>& a) {
  MatX<S> out(a.cols(), a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out(j, i) = scalar_traits<S>::conj(a(i, j));
  return out;
}

// Least-squares solution via the normal equations.  Fine at the sizes and
// precisions used here (heavily overdetermined fits at >= 53 bits).
template <class S>
VecX<S> least_squares(const MatX<S>& a, const VecX<S>& b,
                      const typename scalar_traits<S>::real_type& rel_tol = {}) {
  MatX<S> ah = adjoint_of(a);
  MatX<S> g = ah * a;
  VecX<S> rhs = ah * b;
  return solve<S>(g, rhs, rel_tol);
}

// Orthogonal projector onto the column span of a full-column-rank matrix.
template <class S>
MatX<S> orthogonal_projector(const MatX<S>& basis) {
  MatX<S> bh = adjoint_of(basis);
  MatX<S> g = bh * basis;
  // T = G^{-1} B^H, row by row through the echelon solver.
  MatX<S> aug(g.rows(), g.cols() + bh.cols());
  aug.leftCols(g.cols()) = g;
  aug.rightCols(bh.cols()) = bh;
  Echelon<S> e = rref<S>(aug);
  if (e.rank() < g.rows())
    throw std::invalid_argument("orthogonal_projector: basis is rank-deficient");
  MatX<S> t = e.mat.rightCols(bh.cols());
  return basis * t;
}

}  // namespace gaudin

#endif
