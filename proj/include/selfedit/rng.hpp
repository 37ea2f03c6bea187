#pragma once

#include <cstdint>

#include "selfedit/rational.hpp"

namespace selfedit {

// SplitMix64 stream. Every stochastic decision in a run draws from a
// stream derived from (seed, organism id, generation), so outcomes never
// depend on scheduling or iteration order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) {
    return n == 0 ? 0 : next_u64() % n;
  }

  // true with exact probability clamp(p, 0, 1)
  bool bernoulli(const Rational& p) {
    std::uint64_t u = next_u64();
    if (p.num() <= 0) return false;
    if (p.num() >= p.den()) return true;
    unsigned __int128 threshold =
        (static_cast<unsigned __int128>(p.num()) << 64) /
        static_cast<unsigned __int128>(p.den());
    return static_cast<unsigned __int128>(u) < threshold;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
  z = (z ^ (z >> 33)) * 0xC4CEB9FE1A85EC53ULL;
  return z ^ (z >> 33);
}

// Pure function of (seed, organism, generation); streams for distinct
// pairs are statistically independent.
inline RngStream derive_stream(std::uint64_t seed, std::uint64_t organism_id,
                               std::int64_t generation) {
  std::uint64_t h = mix64(seed ^ 0xD6E8FEB86659FD93ULL);
  h = mix64(h ^ (organism_id * 0x9E3779B97F4A7C15ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(generation) * 0xC2B2AE3D27D4EB4FULL));
  return RngStream(h);
}

}  // namespace selfedit
