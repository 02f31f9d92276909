#include "fave/rng.h"

namespace fave {

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32), 0x5eedu};
  engine_.seed(seq);
}

}  // namespace fave
