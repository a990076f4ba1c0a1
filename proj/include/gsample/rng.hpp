#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gsample {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic substream seed for a tuple of tags under a base seed.
// Distinct tag tuples give statistically independent mt19937_64 streams.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t t : tags) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

// Stream tags used across the library.
namespace stream {
inline constexpr std::uint64_t kGraph = 0x47524150ULL;
inline constexpr std::uint64_t kSignal = 0x5349474eULL;
inline constexpr std::uint64_t kNoise = 0x4e4f4953ULL;
inline constexpr std::uint64_t kMethod = 0x4d455448ULL;
inline constexpr std::uint64_t kSolver = 0x534f4c56ULL;
}  // namespace stream

}  // namespace gsample
