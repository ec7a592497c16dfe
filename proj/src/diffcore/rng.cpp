#include "switchlab/diffcore/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace switchlab::diff {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream) {
  state_ = 0u;
  inc_ = (splitmix64(stream ^ 0xda3e39cb94b95bdbull) << 1u) | 1u;
  next_u32();
  state_ += splitmix64(seed);
  next_u32();
}

uint32_t Rng::next_u32() {
  uint64_t old = state_;
  state_ = old * 6364136223846793005ull + inc_;
  uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
  uint32_t rot = static_cast<uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((-rot) & 31));
}

float Rng::uniform() {
  return static_cast<float>(next_u32() >> 8) * (1.0f / 16777216.0f);
}

int Rng::below(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::below requires n > 0");
  // Rejection sampling to avoid modulo bias.
  uint32_t un = static_cast<uint32_t>(n);
  uint32_t threshold = (-un) % un;
  for (;;) {
    uint32_t r = next_u32();
    if (r >= threshold) return static_cast<int>(r % un);
  }
}

float Rng::gaussian() {
  // Box-Muller; u clamped away from 0 so the log stays finite.
  float u = uniform();
  float v = uniform();
  if (u < 1e-12f) u = 1e-12f;
  double r = std::sqrt(-2.0 * std::log(static_cast<double>(u)));
  double theta = 2.0 * 3.14159265358979323846 * static_cast<double>(v);
  return static_cast<float>(r * std::cos(theta));
}

uint64_t derive_seed(uint64_t root, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t x = splitmix64(root);
  x = splitmix64(x ^ a);
  x = splitmix64(x ^ b);
  x = splitmix64(x ^ c);
  return x;
}

}  // namespace switchlab::diff
