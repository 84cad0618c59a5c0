// Counter-based, splittable pseudo-random utilities.  Every random quantity
// in the library is derived from a 64-bit seed through these functions, so
// results are bit-identical across runs and thread counts.
#pragma once

#include <cstdint>

namespace qmcdens {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output function (Stafford mix13).  Bijective avalanche on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// i-th value of the SplitMix64 stream anchored at `seed`.  Used both as a
// keyed hash and to derive independent child streams: the result is itself a
// valid seed, so derivations nest.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t i) noexcept {
  return mix64(seed + kGolden * (i + 1));
}

constexpr double to_unit_double(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Sequential variant for bulk generation within one derived stream.
class SplitMix64 {
public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  constexpr double next_double() noexcept { return to_unit_double(next()); }

private:
  std::uint64_t state_;
};

}  // namespace qmcdens
