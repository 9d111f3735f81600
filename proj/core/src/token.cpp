#include "pervascan/token.hpp"

#include <cstdio>
#include <random>

namespace pervascan {

namespace {

std::uint64_t entropy_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

}  // namespace

TokenGenerator::TokenGenerator(std::optional<std::uint64_t> seed) : rng_(seed ? *seed : entropy_seed()) {}

std::string TokenGenerator::next() {
  std::uint64_t value;
  {
    std::lock_guard lock(mutex_);
    value = rng_.next();
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

}  // namespace pervascan
