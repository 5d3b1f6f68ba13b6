#pragma once

#include <cstdint>
#include <random>

namespace curvcap {

// Counter-based stream: the state is a pure function of (seed, draw index,
// stream tag), so any draw can be replayed without replaying its predecessors.
class DrawStream {
 public:
  DrawStream(std::uint64_t seed, std::uint64_t draw_index, std::uint32_t stream = 0);

  // Uniform in [0, 1) with 53 random bits; platform independent.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace curvcap
