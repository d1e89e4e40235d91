#ifndef GAUDIN_CONFIG_HPP
#define GAUDIN_CONFIG_HPP

#include <cstdint>
#include <stdexcept>

namespace gaudin {

// Raised for malformed input (bad JSON, inconsistent weights, coincident
// evaluation points).  The CLI maps it to exit code 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a numerical stage cannot certify its result (roots did not
// settle, a limit did not converge, a subspace leaked).  The CLI reports it
// in the output and maps it to exit code 1.
struct compute_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace config {

// Working precision in bits for all MpReal/MpComplex arithmetic created
// after the call.  Existing values keep the precision they were made with.
void set_precision(unsigned bits);
unsigned precision();

}  // namespace config

// SplitMix64.  All randomness in the library flows through instances of
// this generator seeded from values recorded in the reports, so every run
// with the same seed is bit-for-bit reproducible across platforms.  The
// standard <random> distributions are not used because their output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi].  Modulo bias is irrelevant for the tiny ranges
  // used here.
  long uniform(long lo, long hi) {
    if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next() % span);
  }

  // Nonzero integer in [-bound, bound].
  long nonzero(long bound) {
    long v = 0;
    while (v == 0) v = uniform(-bound, bound);
    return v;
  }

  // Deterministically derive an independent stream, e.g. for retries.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    return r.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace gaudin

#endif
