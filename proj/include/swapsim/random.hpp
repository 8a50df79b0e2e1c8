#pragma once

#include <cstdint>
#include <string_view>

namespace swapsim {

/// 64-bit finalizer (SplitMix64 / Stafford mix13).
inline std::uint64_t mix_bits(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

/// Deterministic key of the substream (seed, label, index).
inline std::uint64_t stream_key(std::uint64_t seed, std::string_view label,
                                std::uint64_t index = 0) {
  std::uint64_t k = mix_bits(seed ^ 0x9E3779B97F4A7C15ULL);
  for (const char c : label) {
    k = mix_bits(k ^ static_cast<unsigned char>(c));
  }
  return mix_bits(k ^ index);
}

/// Independent child seed for per-pair or per-shard substreams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                                 std::uint64_t index = 0) {
  return stream_key(seed, label, index);
}

// Names of the per-round substreams of the master seed. Giving the two
// hidden-variable sources distinct keyed streams makes their statistical
// independence structural rather than incidental.
namespace stream_label {
inline constexpr std::string_view kAliceReferee = "lambdaAR";
inline constexpr std::string_view kRefereeBob = "lambdaRB";
inline constexpr std::string_view kBobAccept = "bobU";
inline constexpr std::string_view kFlip = "flip";
inline constexpr std::string_view kSettings = "settings";
}  // namespace stream_label

/// Counter-based stream: draw i is a pure function of (key, i), so two
/// parties constructing the same (seed, label, index) stream see identical
/// sequences without sharing any state. Platform-independent: no libm or
/// distribution objects involved.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0)
      : key_(stream_key(seed, label, index)),
        increment_(mix_bits(key_ ^ 0xD1B54A32D192ED03ULL) | 1ULL),
        state_(key_) {}

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() {
    state_ += increment_;
    return mix_bits(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, width).
  double next_scaled(double width) { return next_unit() * width; }

  int next_bit() { return static_cast<int>(next_u64() >> 63); }

 private:
  std::uint64_t key_;
  std::uint64_t increment_;
  std::uint64_t state_;
};

}  // namespace swapsim
