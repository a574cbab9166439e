#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace hyperalpha {

/// Written into every report so a stored seed can be replayed against the
/// same stream definition. Bump when any of the functions below change.
inline constexpr std::string_view kRngVersion = "splitmix64-counter/1";

namespace rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// The index-th output of a SplitMix64 stream seeded with `seed`, computed
/// without touching earlier outputs.
constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * kGamma);
}

/// Seed of an independent sub-stream, e.g. one per trial.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + kGamma));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Uniform value attached to position `index` of stream `seed`.
constexpr double uniform_at(std::uint64_t seed, std::uint64_t index) {
  return to_unit(at(seed, index));
}

/// Sequential SplitMix64 satisfying UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGamma;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

}  // namespace rng
}  // namespace hyperalpha
