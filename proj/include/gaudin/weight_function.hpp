#ifndef GAUDIN_WEIGHT_FUNCTION_HPP
#define GAUDIN_WEIGHT_FUNCTION_HPP

#include <vector>

#include "gaudin/gln.hpp"

namespace gaudin {

// Root coordinates stacked by level: level[0] holds the n evaluation points
// t^{(0)}, level[a] the l_a coordinates t^{(a)} for a = 1..N-1.
template <class S>
struct RootCoordinates {
  std::vector<std::vector<S>> level;

  RootCoordinates() = default;
  explicit RootCoordinates(std::vector<std::vector<S>> lv)
      : level(std::move(lv)) {
    if (level.empty()) throw input_error("root coordinates need a base level");
  }

  int rank() const { return static_cast<int>(level.size()); }
  int degree() const { return static_cast<int>(level[0].size()); }
  std::vector<long> shape() const {
    std::vector<long> l;
    for (std::size_t a = 1; a < level.size(); ++a)
      l.push_back(static_cast<long>(level[a].size()));
    return l;
  }
};

// J together with the slot sets S_i(J) = {s : j_s > i}; S_of is S_1, the
// slots carrying a non-highest basis vector.
struct AdmissibleIndexData {
  std::vector<int> J;
  std::vector<std::vector<int>> S_i;  // S_i[a-1], ascending slots, a=1..N-1

  const std::vector<int>& S_of() const {
    static const std::vector<int> empty;
    return S_i.empty() ? empty : S_i[0];
  }

  // Position of slot s within S_i[a-1]; s must be a member.
  int position(int a, int s) const {
    const auto& set = S_i[a - 1];
    auto it = std::lower_bound(set.begin(), set.end(), s);
    if (it == set.end() || *it != s)
      throw std::invalid_argument("slot not present at this level");
    return static_cast<int>(it - set.begin());
  }
};

inline AdmissibleIndexData index_data(const std::vector<int>& J, int rank) {
  AdmissibleIndexData d;
  d.J = J;
  d.S_i.resize(rank - 1);
  for (int a = 1; a < rank; ++a)
    for (std::size_t s = 0; s < J.size(); ++s)
      if (J[s] > a) d.S_i[a - 1].push_back(static_cast<int>(s));
  return d;
}

namespace detail {

template <class S>
S inverse_difference(const S& hi, const S& lo) {
  S d = hi - lo;
  if (scalar_traits<S>::is_zero(d))
    throw compute_error("non-generic t: coincident root coordinates");
  return S(1) / d;
}

}  // namespace detail

// One summand of omega_J: the path product along levels 1..j_s-1 for slot s,
// where beta[a-1][p] gives the 0-based t^{(a)} index assigned to the p-th
// slot of S_a(J).  For j_s = 2 the chain is the single level-1 factor.
template <class S>
S omega_term(int s, const AdmissibleIndexData& data,
             const std::vector<std::vector<int>>& beta,
             const RootCoordinates<S>& t) {
  int js = data.J[s];
  if (js < 2) throw std::invalid_argument("slot carries the highest vector");
  int b_prev = beta[0][data.position(1, s)];
  S acc = detail::inverse_difference(t.level[1][b_prev], t.level[0][s]);
  for (int i = 2; i <= js - 1; ++i) {
    int b_cur = beta[i - 1][data.position(i, s)];
    acc *= detail::inverse_difference(t.level[i][b_cur], t.level[i - 1][b_prev]);
    b_prev = b_cur;
  }
  return acc;
}

namespace detail {

inline long family_count(const std::vector<long>& shape, long cap) {
  long count = 1;
  for (long l : shape) {
    for (long i = 2; i <= l; ++i) {
      count *= i;
      if (count > cap) return count;
    }
  }
  return count;
}

}  // namespace detail

// omega_J(t) = sum over all families of per-level bijections of the product
// of omega_term over the slots of S(J).
template <class S>
S omega_J(const RootCoordinates<S>& t, const std::vector<int>& J,
          long max_families = 1000000) {
  int rank = t.rank();
  std::vector<long> shape = t.shape();
  if (detail::family_count(shape, max_families) > max_families)
    throw compute_error("bijection family count exceeds the configured cap");
  AdmissibleIndexData data = index_data(J, rank);
  for (int a = 1; a < rank; ++a)
    if (static_cast<long>(data.S_i[a - 1].size()) != shape[a - 1])
      throw std::invalid_argument("index tuple is not admissible for t");

  std::vector<std::vector<std::vector<int>>> perms(rank - 1);
  for (int a = 1; a < rank; ++a) {
    std::vector<int> p(shape[a - 1]);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<int>(i);
    do {
      perms[a - 1].push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }

  S total(0);
  std::vector<std::size_t> odo(rank - 1, 0);
  std::vector<std::vector<int>> beta(rank - 1);
  for (;;) {
    for (int a = 0; a < rank - 1; ++a) beta[a] = perms[a][odo[a]];
    S prod(1);
    for (int s : data.S_of()) prod *= omega_term(s, data, beta, t);
    total += prod;
    int a = 0;
    while (a < rank - 1 && ++odo[a] == perms[a].size()) odo[a++] = 0;
    if (a == rank - 1) break;
  }
  return total;
}

// The assembled weight-function vector in (V^{tensor n})_lambda, supported on
// the admissible tuples for the shape of t.
template <class S>
VecX<S> omega(const RootCoordinates<S>& t, long max_families = 1000000) {
  int rank = t.rank();
  int n = t.degree();
  long dim = 1;
  for (int s = 0; s < n; ++s) dim *= rank;
  ModuleSpace<S> sp(rank, t.level[0]);
  VecX<S> out = VecX<S>::Zero(dim);
  for (const auto& J : admissible_indices(n, t.shape()))
    out[sp.index_of(J)] = omega_J(t, J, max_families);
  return out;
}

}  // namespace gaudin

#endif
