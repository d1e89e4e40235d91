#include "gaudin/config.hpp"

#include <atomic>

namespace gaudin::config {

namespace {
std::atomic<unsigned> g_precision{53};
}

void set_precision(unsigned bits) {
  if (bits < 24 || bits > 1u << 20)
    throw std::invalid_argument("precision must be between 24 and 2^20 bits");
  g_precision.store(bits, std::memory_order_relaxed);
}

unsigned precision() { return g_precision.load(std::memory_order_relaxed); }

}  // namespace gaudin::config
