#ifndef GAUDIN_PARTITION_HPP
#define GAUDIN_PARTITION_HPP

#include <numeric>
#include <string>
#include <vector>

#include "gaudin/config.hpp"

namespace gaudin {

// Weakly decreasing nonnegative integer tuple with exactly N parts
// (trailing zeros significant: they fix N).
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<long> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 0)
        throw input_error("partition with negative part");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw input_error("partition parts must be weakly decreasing");
    }
  }
  Partition(std::initializer_list<long> parts)
      : Partition(std::vector<long>(parts)) {}

  int n_parts() const { return static_cast<int>(parts_.size()); }
  long part(int i) const { return parts_.at(i); }
  const std::vector<long>& parts() const { return parts_; }

  long weight() const {
    return std::accumulate(parts_.begin(), parts_.end(), 0L);
  }

  // Flag-basis degrees d_i = lambda_i + N - i (1-based i), strictly
  // decreasing.
  std::vector<long> degrees() const {
    std::vector<long> d(parts_.size());
    long n = n_parts();
    for (int i = 0; i < n; ++i) d[i] = parts_[i] + n - (i + 1);
    return d;
  }

  // l_a = sum of parts below level a, for a = 0..N.
  std::vector<long> level_sizes() const {
    int n = n_parts();
    std::vector<long> l(n + 1, 0);
    for (int a = n - 1; a >= 0; --a) l[a] = l[a + 1] + parts_[a];
    return l;
  }

  // Exponents prescribed at a finite singular point carrying this local
  // partition: {lambda_N, lambda_{N-1}+1, ..., lambda_1+N-1}, ascending.
  std::vector<long> finite_exponents() const {
    int n = n_parts();
    std::vector<long> e(n);
    for (int i = 0; i < n; ++i) e[i] = parts_[n - 1 - i] + i;
    return e;
  }

  // Exponents prescribed at infinity: {-d_1, ..., -d_N}, ascending.
  std::vector<long> infinity_exponents() const {
    auto d = degrees();
    std::vector<long> e(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) e[i] = -d[i];
    return e;
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.parts_ == b.parts_;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<long> parts_;
};

}  // namespace gaudin

#endif
