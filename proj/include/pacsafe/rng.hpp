#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace pacsafe {

// Stream indices used by the certification pipelines.  Every random draw in
// the library is attributable to exactly one (seed, stream) pair, so a
// certificate can be replayed bit-for-bit from its recorded seed.
namespace streams {
inline constexpr std::uint64_t kStateDraws = 0;       // scenario states
inline constexpr std::uint64_t kDisturbanceDraws = 1;  // per-draw seed hints
inline constexpr std::uint64_t kMonteCarlo = 2;        // validation only
inline constexpr std::uint64_t kAnchorStates = 3;      // SBC objective anchors
}  // namespace streams

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Finalizer of SplitMix64 (Steele, Lea, Flood 2014).  Bijective on u64.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}
}  // namespace detail

// Counter-mode SplitMix64 stream.
//
// Construction:  key = mix64(mix64(seed) + GOLDEN * (stream + 1))
// Output i (1-based):  out_i = mix64(key + GOLDEN * i)
//
// This is exactly the SplitMix64 sequence started at state `key`, so it
// inherits its statistical quality.  The (seed, stream) pair fully determines
// the sequence; there is no hidden state beyond the call counter, so a stream
// can be reconstructed anywhere (including inside an external plugin, which
// receives per-draw seed hints and runs the same construction).
class RngStream {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-ctr/v1";

  RngStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed),
        stream_(stream),
        key_(detail::mix64(detail::mix64(seed) +
                           detail::kGolden * (stream + 1))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t draws() const { return counter_; }

  std::uint64_t next_u64() {
    return detail::mix64(key_ + detail::kGolden * (++counter_));
  }

  // Uniform on [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller.  Always consumes exactly two uniforms and
  // returns the cosine branch, so the draw count stays in lockstep with the
  // counter (no cached spare that would complicate replay).
  double next_normal() {
    double u1 = 1.0 - next_unit();  // (0, 1]: keeps log() finite
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace pacsafe
