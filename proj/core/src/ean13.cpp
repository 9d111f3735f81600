#include "pervascan/ean13.hpp"

#include <algorithm>

#include "pervascan/error.hpp"

namespace pervascan {

namespace {

bool all_digits(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void require_digits(std::string_view text, std::size_t count) {
  if (text.size() != count || !all_digits(text)) {
    throw Error(Errc::bad_length,
                "expected exactly " + std::to_string(count) + " decimal digits, got \"" +
                    std::string(text) + "\"");
  }
}

int weighted_check(std::string_view payload) {
  int sum = 0;
  for (std::size_t i = 0; i < payload.size(); ++i) {
    const int digit = payload[i] - '0';
    // Position i+1 is odd for even i.
    sum += (i % 2 == 0) ? digit : 3 * digit;
  }
  return (10 - sum % 10) % 10;
}

}  // namespace

int checksum_digit(std::string_view payload) {
  require_digits(payload, 12);
  return weighted_check(payload);
}

bool validate(std::string_view code) {
  require_digits(code, 13);
  return weighted_check(code.substr(0, 12)) == code[12] - '0';
}

Ean13 Ean13::parse(std::string_view text) {
  if (!validate(text)) {
    throw Error(Errc::invalid_code, "invalid check digit in \"" + std::string(text) + "\"");
  }
  Digits digits{};
  for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = static_cast<std::uint8_t>(text[i] - '0');
  return Ean13(digits);
}

std::optional<Ean13> Ean13::try_parse(std::string_view text) noexcept {
  if (text.size() != 13 || !all_digits(text) || !validate(text)) return std::nullopt;
  return parse(text);
}

Ean13 Ean13::from_payload(std::string_view payload) {
  const int check = checksum_digit(payload);
  std::string code(payload);
  code.push_back(static_cast<char>('0' + check));
  return parse(code);
}

std::string Ean13::str() const {
  std::string out(13, '0');
  for (std::size_t i = 0; i < digits_.size(); ++i) out[i] = static_cast<char>('0' + digits_[i]);
  return out;
}

}  // namespace pervascan
