#pragma once

#include <cstdint>

// Seeding scheme used everywhere randomness appears:
//
//   splitmix64        -- the finalizer from Vigna's splitmix64 generator
//   derive_seed(s, i) -- stream i of master seed s, via one splitmix64 step
//   bernoulli_member  -- order-independent membership draw for (seed, index)
//
// Membership draws depend only on (seed, index), never on evaluation order,
// so parallel and serial runs see identical sets.

namespace crtspace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// True with probability prob (clamped to [0,1]) for the given (seed, index).
inline bool bernoulli_member(std::uint64_t seed, std::uint64_t index, double prob) {
  if (prob >= 1.0) return true;
  if (prob <= 0.0) return false;
  const auto threshold =
      static_cast<std::uint64_t>(prob * 18446744073709551616.0 /* 2^64 */);
  return derive_seed(seed, index) < threshold;
}

// Sequential generator for places where a stream is more natural than
// per-index draws (random offset tuples, shuffles).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() { return splitmix64(state_++); }
  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }
  double next_double() { return (next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace crtspace
