#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pervascan {

/// GS1 mod-10 check digit over a 12-digit payload (weights 1,3,1,3,...
/// from the left). Throws Error(bad_length) unless given exactly 12 digits.
int checksum_digit(std::string_view payload);

/// True iff the 13th digit equals checksum_digit of the first twelve.
/// Throws Error(bad_length) unless given exactly 13 digits.
bool validate(std::string_view code);

/// A checksum-valid 13-digit EAN-13 value. The only way to obtain one is
/// through parse/try_parse/from_payload, so every instance validates.
class Ean13 {
public:
  using Digits = std::array<std::uint8_t, 13>;

  /// Throws Error(bad_length) on shape errors, Error(invalid_code) on a bad check digit.
  static Ean13 parse(std::string_view text);
  static std::optional<Ean13> try_parse(std::string_view text) noexcept;
  /// Appends the computed check digit to a 12-digit payload.
  static Ean13 from_payload(std::string_view payload);

  const Digits& digits() const noexcept { return digits_; }
  std::string str() const;

  friend auto operator<=>(const Ean13&, const Ean13&) = default;

private:
  explicit Ean13(const Digits& digits) noexcept : digits_(digits) {}
  Digits digits_;
};

}  // namespace pervascan
