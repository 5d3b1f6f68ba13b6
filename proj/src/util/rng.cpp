#include "curvcap/util/rng.hpp"

namespace curvcap {

DrawStream::DrawStream(std::uint64_t seed, std::uint64_t draw_index, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(draw_index),
                    static_cast<std::uint32_t>(draw_index >> 32), stream};
  engine_.seed(seq);
}

double DrawStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace curvcap
