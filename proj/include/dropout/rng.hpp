#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace dropout::rng {

// Deterministic PRNG used everywhere a seed appears in this project (fold
// shuffling, cohort sampling), pinned so that equal seeds give byte-identical
// artifacts across platforms and implementations.
//
// Algorithm (all arithmetic on unsigned 64-bit words, wrap-around):
//   seeding     : the four state words are the first four outputs of a
//                 splitmix64 stream started at the user seed.
//   next()      : xoshiro256** (Blackman/Vigna 2018),
//                 result = rotl(s1 * 5, 7) * 9, then the linear state update.
//   next_below(n): unbiased rejection; draw 64-bit words until
//                 r >= (2^64 mod n), return r mod n.
//   next_unit() : (next() >> 11) * 2^-53, uniform on [0, 1).
//   shuffle(v)  : Fisher-Yates from the back, j = next_below(i + 1).
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, n). n must be nonzero.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform on [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

}  // namespace dropout::rng
