#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "pervascan/ean13.hpp"

namespace pervascan::testing {

inline Ean13 random_code(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> digit(0, 9);
  std::string payload(12, '0');
  for (char& c : payload) c = static_cast<char>('0' + digit(rng));
  return Ean13::from_payload(payload);
}

/// Independent check-digit oracle: sums the weighted digits of the full
/// 13-digit code (check digit weight 1) and tests divisibility by 10.
inline bool mod10_oracle(const std::string& code) {
  int sum = 0;
  for (std::size_t i = 0; i < code.size(); ++i) sum += (code[i] - '0') * (i % 2 == 0 ? 1 : 3);
  return sum % 10 == 0;
}

/// Fresh scratch directory under the system temp dir, removed on scope exit.
class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pervascan-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

}  // namespace pervascan::testing
