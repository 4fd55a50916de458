// Deterministic random streams. Every parallel worker and every Monte Carlo
// trial derives its own substream from (master seed, index), so results do
// not depend on scheduling or thread count.
#pragma once

#include <cstdint>
#include <random>

namespace rgl {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(mix(seed, 0)) {}

  static Rng substream(std::uint64_t master, std::uint64_t index) {
    return Rng(master, index);
  }

  std::uint64_t next() { return eng_(); }

  // Unbiased uniform draw from [0, n). n must be nonzero.
  std::uint64_t below(std::uint64_t n) {
    for (;;) {
      std::uint64_t x = eng_();
      std::uint64_t r = x % n;
      if (x - r <= ~std::uint64_t{0} - (n - 1)) return r;
    }
  }

 private:
  Rng(std::uint64_t master, std::uint64_t index) : eng_(mix(master, index)) {}

  static std::uint64_t mix(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0xD1B54A32D192ED03ULL * (index + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1) ^ (b >> 63);
  }

  std::mt19937_64 eng_;
};

}  // namespace rgl
