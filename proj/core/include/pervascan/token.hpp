#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>

#include "pervascan/prng.hpp"

namespace pervascan {

/// Issues 16-character lowercase hex tokens (photo and job identifiers).
/// With a seed the sequence is reproducible; without one each generator is
/// seeded from std::random_device. Thread-safe.
class TokenGenerator {
public:
  explicit TokenGenerator(std::optional<std::uint64_t> seed = std::nullopt);

  std::string next();

private:
  std::mutex mutex_;
  SplitMix64 rng_;
};

}  // namespace pervascan
