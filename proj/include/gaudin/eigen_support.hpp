#ifndef GAUDIN_EIGEN_SUPPORT_HPP
#define GAUDIN_EIGEN_SUPPORT_HPP

#include <Eigen/Core>

#include "gaudin/scalar_traits.hpp"

namespace Eigen {

template <>
struct NumTraits<gaudin::Rational>
    : GenericNumTraits<gaudin::Rational> {
  typedef gaudin::Rational Real;
  typedef gaudin::Rational NonInteger;
  typedef gaudin::Rational Nested;
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 100,
    MulCost = 100
  };
};

template <>
struct NumTraits<gaudin::MpReal> : GenericNumTraits<gaudin::MpReal> {
  typedef gaudin::MpReal Real;
  typedef gaudin::MpReal NonInteger;
  typedef gaudin::MpReal Nested;
  static inline Real epsilon() {
    return gaudin::MpReal::pow2(1 - static_cast<long>(gaudin::config::precision()));
  }
  static inline Real dummy_precision() {
    return gaudin::MpReal::pow2(-static_cast<long>(gaudin::config::precision()) / 2);
  }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 60,
    MulCost = 60
  };
};

template <>
struct NumTraits<gaudin::MpComplex> : GenericNumTraits<gaudin::MpComplex> {
  typedef gaudin::MpReal Real;
  typedef gaudin::MpComplex NonInteger;
  typedef gaudin::MpComplex Nested;
  static inline Real epsilon() { return NumTraits<gaudin::MpReal>::epsilon(); }
  static inline Real dummy_precision() {
    return NumTraits<gaudin::MpReal>::dummy_precision();
  }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 0,
    IsComplex = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 120,
    MulCost = 240
  };
};

}  // namespace Eigen

namespace gaudin {

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Largest |entry|; the workhorse norm here because it stays inside the
// scalar's own real domain (no square roots needed for rationals).
template <class S>
typename scalar_traits<S>::real_type max_norm(const MatX<S>& m) {
  using ST = scalar_traits<S>;
  typename ST::real_type best = ST::abs(S(0));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      auto a = ST::abs(m(i, j));
      if (a > best) best = a;
    }
  return best;
}

template <class S>
typename scalar_traits<S>::real_type max_norm(const VecX<S>& v) {
  using ST = scalar_traits<S>;
  typename ST::real_type best = ST::abs(S(0));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    auto a = ST::abs(v(i));
    if (a > best) best = a;
  }
  return best;
}

inline MpReal norm2(const VecX<MpComplex>& v) {
  MpReal s(0L);
  for (Eigen::Index i = 0; i < v.size(); ++i) s += abs2(v(i));
  return sqrt(s);
}

// Hermitian inner product <a, b> = sum conj(a_i) b_i.
inline MpComplex dot(const VecX<MpComplex>& a, const VecX<MpComplex>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  MpComplex s;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += conj(a(i)) * b(i);
  return s;
}

template <class S>
VecX<S> vec_from_rational(const VecX<Rational>& v) {
  VecX<S> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = scalar_traits<S>::from_rational(v(i));
  return out;
}

template <class S>
MatX<S> mat_from_rational(const MatX<Rational>& m) {
  MatX<S> out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      out(i, j) = scalar_traits<S>::from_rational(m(i, j));
  return out;
}

}  // namespace gaudin

#endif
