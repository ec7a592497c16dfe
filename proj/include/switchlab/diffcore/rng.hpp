#pragma once

#include <cstdint>
#include <vector>

namespace switchlab::diff {

// PCG32 generator. Small, fast, and the stream is fully determined by
// (seed, stream), which keeps every pipeline stage reproducible without
// depending on libstdc++ distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0);

  uint32_t next_u32();

  // Uniform in [0, 1) with 24 bits of mantissa.
  float uniform();

  // Uniform in [0, n). n must be positive.
  int below(int n);

  // Standard normal via Box-Muller (deterministic, no cached spare).
  float gaussian();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[i], v[below(i + 1)]);
    }
  }

 private:
  uint64_t state_;
  uint64_t inc_;
};

// Stable seed derivation for independent substreams (dataset records,
// evaluation trials, ...). Mixes all words through splitmix64.
uint64_t derive_seed(uint64_t root, uint64_t a, uint64_t b = 0, uint64_t c = 0);

}  // namespace switchlab::diff
