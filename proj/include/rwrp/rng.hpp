#pragma once

#include <array>
#include <cstdint>

namespace rwrp {

// 64-bit finalizer used both as the PRNG output stage and as a site hash.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Counter-based splitmix64. Every replica/site stream is derived from
// (base_seed, stream_id), so results do not depend on scheduling order.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in (0,1): 53-bit mantissa, offset so 0 is excluded
  double next_unit() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // unbiased uniform integer in [0, n), Lemire with rejection
  std::uint32_t next_below(std::uint32_t n) {
    std::uint64_t x = next() & 0xffffffffull;
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m) & 0xffffffffull;
    if (lo < n) {
      std::uint64_t t = (0x100000000ull - n) % n;
      while (lo < t) {
        x = next() & 0xffffffffull;
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m) & 0xffffffffull;
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }
};

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream + 0x632be59bd9b4e019ull));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t s1,
                                 std::uint64_t s2) {
  return derive_seed(derive_seed(base, s1), s2);
}

}  // namespace rwrp
