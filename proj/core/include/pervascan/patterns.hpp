#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pervascan {

enum class Parity : std::uint8_t { odd, even };

/// A 7-module digit encoding, most significant of the low 7 bits is the
/// leftmost module; 1 = bar (dark), 0 = space (light).
using DigitPattern = std::uint8_t;

inline constexpr std::size_t kSymbolModules = 95;
inline constexpr std::size_t kDigitModules = 7;

/// L codes (odd parity) for digits 0-9.
inline constexpr std::array<DigitPattern, 10> kLCodes = {
    0b0001101, 0b0011001, 0b0010011, 0b0111101, 0b0100011,
    0b0110001, 0b0101111, 0b0111011, 0b0110111, 0b0001011,
};

/// R = bitwise complement of L within 7 modules.
constexpr DigitPattern r_code(int digit) { return static_cast<DigitPattern>(~kLCodes[digit] & 0x7F); }

/// G = the R code read right to left.
constexpr DigitPattern g_code(int digit) {
  DigitPattern r = r_code(digit);
  DigitPattern out = 0;
  for (std::size_t i = 0; i < kDigitModules; ++i) out = static_cast<DigitPattern>((out << 1) | ((r >> i) & 1));
  return out;
}

/// Leading-digit parity table: entry d gives the parities of the six left-half
/// digits when the leading (implicit) digit is d.
inline constexpr std::array<std::array<Parity, 6>, 10> kParityTable = [] {
  constexpr const char* rows[10] = {"OOOOOO", "OOEOEE", "OOEEOE", "OOEEEO", "OEOOEE",
                                    "OEEOOE", "OEEEOO", "OEOEOE", "OEOEEO", "OEEOEO"};
  std::array<std::array<Parity, 6>, 10> table{};
  for (int d = 0; d < 10; ++d) {
    for (int i = 0; i < 6; ++i) table[d][i] = rows[d][i] == 'O' ? Parity::odd : Parity::even;
  }
  return table;
}();

/// Run widths (in modules) of a 7-module pattern, left to right. Every
/// L/G/R pattern has exactly four runs.
std::array<int, 4> pattern_runs(DigitPattern pattern);

/// Lays out the 95-module EAN-13 symbol for 13 digits without checking the
/// check digit (test harnesses use this to render deliberately bad symbols).
std::bitset<kSymbolModules> encode_modules(std::span<const std::uint8_t, 13> digits);

struct TableCheck {
  std::string name;
  bool passed;
};

/// Structural invariants of the pattern and parity tables: four runs summing
/// to seven, L odd / G,R even bit parity, the complement and reversal
/// relations, and a 10-entry parity table with the expected shape.
std::vector<TableCheck> check_pattern_tables();

}  // namespace pervascan
