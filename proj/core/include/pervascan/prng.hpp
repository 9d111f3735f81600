#pragma once

#include <cstdint>
#include <optional>

namespace pervascan {

/// SplitMix64: state advances by the golden-ratio increment and the output is
/// the standard three-step finalizer. Same seed, same sequence.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in the open interval (0, 1); never returns 0.
  double next_unit() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

private:
  std::uint64_t state_;
};

/// Standard normal draws via the Box-Muller transform over a SplitMix64
/// stream. Each pair of uniforms yields two normals; the second is cached.
class GaussianSource {
public:
  explicit GaussianSource(std::uint64_t seed) noexcept : uniform_(seed) {}

  double next() noexcept;

private:
  SplitMix64 uniform_;
  std::optional<double> spare_;
};

}  // namespace pervascan
