#ifndef GAUDIN_MATRIX_DIFFOP_HPP
#define GAUDIN_MATRIX_DIFFOP_HPP

#include "gaudin/diffop.hpp"

namespace gaudin {

// Matrix of rational functions with one shared denominator, the matrix
// analogue of RationalFunction: num[j] is the matrix coefficient of u^j.
// No gcd cancellation is attempted beyond dropping zero leading terms; the
// consumers compare by evaluation.
template <class S>
class MatRatFun {
 public:
  MatRatFun() : den_(1L), dim_(0) {}
  explicit MatRatFun(Eigen::Index dim)
      : den_(1L), dim_(dim) {}
  MatRatFun(std::vector<MatX<S>> num, Polynomial<S> den)
      : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
      throw std::invalid_argument("matrix rational function: zero denominator");
    if (num_.empty())
      throw std::invalid_argument("matrix rational function: no numerator");
    dim_ = num_.front().rows();
    for (const auto& m : num_)
      if (m.rows() != dim_ || m.cols() != dim_)
        throw std::invalid_argument("matrix rational function: ragged numerator");
    normalize();
  }
  static MatRatFun constant(MatX<S> m) {
    std::vector<MatX<S>> num;
    num.push_back(std::move(m));
    return MatRatFun(std::move(num), Polynomial<S>(1L));
  }
  static MatRatFun identity(Eigen::Index dim) {
    return constant(MatX<S>::Identity(dim, dim));
  }

  Eigen::Index dim() const { return dim_; }
  bool is_zero() const { return num_.empty(); }
  const std::vector<MatX<S>>& num() const { return num_; }
  const Polynomial<S>& den() const { return den_; }

  MatX<S> eval(const S& u) const {
    if (dim_ == 0) throw std::invalid_argument("eval of dimensionless matrix");
    S d = den_.eval(u);
    if (scalar_traits<S>::is_zero(d))
      throw std::invalid_argument("matrix rational function evaluated at a pole");
    MatX<S> acc = MatX<S>::Zero(dim_, dim_);
    for (std::size_t j = num_.size(); j-- > 0;) acc = acc * u + num_[j];
    return acc / d;
  }

  MatRatFun derivative() const {
    if (is_zero()) return *this;
    // (n/d)' = (n' d - n d') / d^2
    std::vector<MatX<S>> nprime;
    for (std::size_t j = 1; j < num_.size(); ++j)
      nprime.push_back(num_[j] * S(static_cast<long>(j)));
    MatRatFun a(nprime.empty()
                    ? std::vector<MatX<S>>{MatX<S>::Zero(dim_, dim_)}
                    : std::move(nprime),
                den_);
    Polynomial<S> dprime = den_.derivative();
    if (dprime.is_zero()) return a;
    std::vector<MatX<S>> nd;
    for (std::size_t j = 0; j < num_.size(); ++j) {
      for (int k = 0; k <= dprime.degree(); ++k) {
        if (nd.size() <= j + k) nd.push_back(MatX<S>::Zero(dim_, dim_));
        nd[j + k] += num_[j] * dprime[k];
      }
    }
    return a - MatRatFun(std::move(nd), den_ * den_);
  }

  friend MatRatFun operator+(const MatRatFun& a, const MatRatFun& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.dim_ != b.dim_)
      throw std::invalid_argument("matrix rational function: dim mismatch");
    auto cross = [](const MatRatFun& x, const Polynomial<S>& od) {
      std::vector<MatX<S>> out(x.num_.size() + od.degree(),
                               MatX<S>::Zero(x.dim_, x.dim_));
      for (std::size_t j = 0; j < x.num_.size(); ++j)
        for (int k = 0; k <= od.degree(); ++k) out[j + k] += x.num_[j] * od[k];
      return out;
    };
    std::vector<MatX<S>> na = cross(a, b.den_), nb = cross(b, a.den_);
    if (na.size() < nb.size()) na.resize(nb.size(), MatX<S>::Zero(a.dim_, a.dim_));
    for (std::size_t j = 0; j < nb.size(); ++j) na[j] += nb[j];
    return MatRatFun(std::move(na), a.den_ * b.den_);
  }
  friend MatRatFun operator-(const MatRatFun& a, const MatRatFun& b) {
    return a + (b * S(-1));
  }
  friend MatRatFun operator*(const MatRatFun& a, const S& s) {
    if (a.is_zero()) return a;
    MatRatFun r = a;
    for (auto& m : r.num_) m *= s;
    r.normalize();
    return r;
  }
  friend MatRatFun operator*(const MatRatFun& a, const MatRatFun& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    if (a.dim_ != b.dim_)
      throw std::invalid_argument("matrix rational function: dim mismatch");
    std::vector<MatX<S>> out(a.num_.size() + b.num_.size() - 1,
                             MatX<S>::Zero(a.dim_, a.dim_));
    for (std::size_t i = 0; i < a.num_.size(); ++i)
      for (std::size_t j = 0; j < b.num_.size(); ++j)
        out[i + j] += a.num_[i] * b.num_[j];
    return MatRatFun(std::move(out), a.den_ * b.den_);
  }
  friend MatRatFun operator*(const RationalFunction<S>& f, const MatRatFun& a) {
    if (a.is_zero() || f.is_zero()) return MatRatFun(a.dim_);
    std::vector<MatX<S>> out(a.num_.size() + f.num().degree() + 1,
                             MatX<S>::Zero(a.dim_, a.dim_));
    for (std::size_t i = 0; i < a.num_.size(); ++i)
      for (int j = 0; j <= f.num().degree(); ++j)
        out[i + j] += a.num_[i] * f.num()[j];
    return MatRatFun(std::move(out), a.den_ * f.den());
  }

 private:
  void normalize() {
    auto all_zero = [](const MatX<S>& m) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
          if (!scalar_traits<S>::is_zero(m(i, j))) return false;
      return true;
    };
    while (!num_.empty() && all_zero(num_.back())) num_.pop_back();
    if (num_.empty()) {
      den_ = Polynomial<S>(1L);
      return;
    }
    S lead = den_.leading();
    if (!(lead == S(1))) {
      for (auto& m : num_) m /= lead;
      den_ /= lead;
    }
  }

  std::vector<MatX<S>> num_;
  Polynomial<S> den_;
  Eigen::Index dim_;
};

// Differential operator with MatRatFun coefficients, ascending in dd.
template <class S>
class MatrixDiffOp {
 public:
  MatrixDiffOp(Eigen::Index dim, std::vector<MatRatFun<S>> ascending)
      : dim_(dim), c_(std::move(ascending)) {
    if (c_.empty())
      throw std::invalid_argument("matrix operator with no coefficients");
    for (const auto& m : c_)
      if (!m.is_zero() && m.dim() != dim_)
        throw std::invalid_argument("matrix operator: dim mismatch");
    while (c_.size() > 1 && c_.back().is_zero()) c_.pop_back();
  }
  static MatrixDiffOp identity(Eigen::Index dim) {
    return MatrixDiffOp(dim, {MatRatFun<S>::identity(dim)});
  }

  Eigen::Index dim() const { return dim_; }
  int order() const { return static_cast<int>(c_.size()) - 1; }
  const MatRatFun<S>& coeff(int k) const {
    static const MatRatFun<S> zero{};
    if (k < 0 || k > order()) return zero;
    return c_[k];
  }

 private:
  Eigen::Index dim_;
  std::vector<MatRatFun<S>> c_;
};

// Entry (r, c) as a scalar rational function over the shared denominator.
template <class S>
RationalFunction<S> entry_rf(const MatRatFun<S>& m, Eigen::Index r,
                             Eigen::Index c) {
  if (m.is_zero()) return RationalFunction<S>();
  std::vector<S> coeffs;
  for (const auto& mat : m.num()) coeffs.push_back(mat(r, c));
  Polynomial<S> num(std::move(coeffs));
  if (num.is_zero()) return RationalFunction<S>();
  return RationalFunction<S>(std::move(num), m.den());
}

template <class S>
MatrixDiffOp<S> operator+(const MatrixDiffOp<S>& a, const MatrixDiffOp<S>& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("matrix operator sum: dim mismatch");
  std::vector<MatRatFun<S>> out(std::max(a.order(), b.order()) + 1,
                                MatRatFun<S>(a.dim()));
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
  return MatrixDiffOp<S>(a.dim(), std::move(out));
}

template <class S>
MatrixDiffOp<S> operator-(const MatrixDiffOp<S>& a, const MatrixDiffOp<S>& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("matrix operator sum: dim mismatch");
  std::vector<MatRatFun<S>> out(std::max(a.order(), b.order()) + 1,
                                MatRatFun<S>(a.dim()));
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = a.coeff(static_cast<int>(k)) -
             b.coeff(static_cast<int>(k));
  return MatrixDiffOp<S>(a.dim(), std::move(out));
}

template <class S2, class S1>
MatRatFun<S2> convert_mrf(const MatRatFun<S1>& m, Eigen::Index dim) {
  if (m.is_zero()) return MatRatFun<S2>(dim);
  std::vector<MatX<S2>> num;
  for (const auto& mat : m.num()) {
    MatX<S2> c(mat.rows(), mat.cols());
    for (Eigen::Index i = 0; i < mat.rows(); ++i)
      for (Eigen::Index j = 0; j < mat.cols(); ++j)
        c(i, j) = S2(mat(i, j));
    num.push_back(std::move(c));
  }
  return MatRatFun<S2>(std::move(num), convert_poly<S2>(m.den()));
}

template <class S2, class S1>
MatrixDiffOp<S2> convert_mdiffop(const MatrixDiffOp<S1>& d) {
  std::vector<MatRatFun<S2>> c;
  for (int k = 0; k <= d.order(); ++k)
    c.push_back(convert_mrf<S2>(d.coeff(k), d.dim()));
  return MatrixDiffOp<S2>(d.dim(), std::move(c));
}

template <class S>
MatrixDiffOp<S> compose(const MatrixDiffOp<S>& a, const MatrixDiffOp<S>& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("compose: matrix operator dim mismatch");
  std::vector<MatRatFun<S>> out(a.order() + b.order() + 1,
                                MatRatFun<S>(a.dim()));
  for (int i = 0; i <= a.order(); ++i) {
    if (a.coeff(i).is_zero()) continue;
    for (int j = 0; j <= b.order(); ++j) {
      if (b.coeff(j).is_zero()) continue;
      MatRatFun<S> der = b.coeff(j);
      for (int m = 0; m <= i; ++m) {
        if (!der.is_zero())
          out[i - m + j] =
              out[i - m + j] +
              (a.coeff(i) * der) * S(detail::binom(i, m));
        if (m < i) der = der.derivative();
      }
    }
  }
  return MatrixDiffOp<S>(a.dim(), std::move(out));
}

// Apply to a vector of polynomials; returns numerator vector per u-degree
// and the common denominator (the operator's coefficient denominators).
template <class S>
std::vector<RationalFunction<S>> apply(const MatrixDiffOp<S>& d,
                                       const std::vector<Polynomial<S>>& f) {
  if (static_cast<Eigen::Index>(f.size()) != d.dim())
    throw std::invalid_argument("apply: vector length != operator dim");
  std::vector<RationalFunction<S>> out(f.size());
  std::vector<Polynomial<S>> der = f;
  for (int k = 0; k <= d.order(); ++k) {
    if (!d.coeff(k).is_zero()) {
      const auto& c = d.coeff(k);
      for (Eigen::Index i = 0; i < d.dim(); ++i) {
        Polynomial<S> acc;
        for (std::size_t j = 0; j < c.num().size(); ++j) {
          Polynomial<S> row;
          for (Eigen::Index l = 0; l < d.dim(); ++l)
            if (!scalar_traits<S>::is_zero(c.num()[j](i, l)))
              row += der[l] * c.num()[j](i, l);
          acc += row * Polynomial<S>::monomial(static_cast<int>(j));
        }
        if (!acc.is_zero())
          out[i] += RationalFunction<S>(std::move(acc), c.den());
      }
    }
    for (auto& g : der) g = g.derivative();
  }
  return out;
}

}  // namespace gaudin

#endif
