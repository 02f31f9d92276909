#pragma once

#include <cstdint>
#include <random>

namespace fave {

// Seedable random stream. Streams derived from the same (master seed,
// stream index) pair are bit-identical across runs; distinct indices give
// independent streams for parallel workers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0);

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fave
