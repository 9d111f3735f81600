#include "pervascan/patterns.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace pervascan {

namespace {

bool module_at(DigitPattern pattern, std::size_t index) {
  return (pattern >> (kDigitModules - 1 - index)) & 1;
}

int run_count(DigitPattern pattern) {
  int runs = 1;
  for (std::size_t i = 1; i < kDigitModules; ++i) {
    if (module_at(pattern, i) != module_at(pattern, i - 1)) ++runs;
  }
  return runs;
}

DigitPattern reverse7(DigitPattern pattern) {
  DigitPattern out = 0;
  for (std::size_t i = 0; i < kDigitModules; ++i) out = static_cast<DigitPattern>((out << 1) | ((pattern >> i) & 1));
  return out;
}

}  // namespace

std::array<int, 4> pattern_runs(DigitPattern pattern) {
  std::array<int, 4> runs{};
  std::size_t run = 0;
  runs[0] = 1;
  for (std::size_t i = 1; i < kDigitModules; ++i) {
    if (module_at(pattern, i) != module_at(pattern, i - 1)) {
      if (++run >= runs.size()) break;
    }
    runs[run] += 1;
  }
  return runs;
}

std::bitset<kSymbolModules> encode_modules(std::span<const std::uint8_t, 13> digits) {
  std::bitset<kSymbolModules> bits;
  std::size_t pos = 0;
  auto put = [&](DigitPattern pattern, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) bits[pos++] = (pattern >> (width - 1 - i)) & 1;
  };
  put(0b101, 3);
  const auto& parities = kParityTable[digits[0] % 10];
  for (std::size_t i = 0; i < 6; ++i) {
    const int d = digits[1 + i] % 10;
    put(parities[i] == Parity::odd ? kLCodes[d] : g_code(d), kDigitModules);
  }
  put(0b01010, 5);
  for (std::size_t i = 0; i < 6; ++i) put(r_code(digits[7 + i] % 10), kDigitModules);
  put(0b101, 3);
  return bits;
}

std::vector<TableCheck> check_pattern_tables() {
  std::vector<TableCheck> checks;
  auto all_digits = [](auto&& pred) {
    for (int d = 0; d < 10; ++d) {
      if (!pred(d)) return false;
    }
    return true;
  };

  checks.push_back({"L/G/R patterns have 4 runs", all_digits([](int d) {
                      return run_count(kLCodes[d]) == 4 && run_count(r_code(d)) == 4 &&
                             run_count(g_code(d)) == 4;
                    })});
  checks.push_back({"L/G/R run widths sum to 7", all_digits([](int d) {
                      for (DigitPattern p : {kLCodes[d], r_code(d), g_code(d)}) {
                        auto runs = pattern_runs(p);
                        int sum = 0;
                        for (int r : runs) sum += r;
                        if (sum != 7) return false;
                      }
                      return true;
                    })});
  checks.push_back({"L starts with space and ends with bar", all_digits([](int d) {
                      return !module_at(kLCodes[d], 0) && module_at(kLCodes[d], 6);
                    })});
  checks.push_back({"L has odd bit parity", all_digits([](int d) {
                      return std::popcount(static_cast<unsigned>(kLCodes[d])) % 2 == 1;
                    })});
  checks.push_back({"R is the complement of L", all_digits([](int d) {
                      return (r_code(d) ^ kLCodes[d]) == 0x7F;
                    })});
  checks.push_back({"G is the reversal of R", all_digits([](int d) {
                      return g_code(d) == reverse7(r_code(d));
                    })});
  checks.push_back({"G and R have even bit parity", all_digits([](int d) {
                      return std::popcount(static_cast<unsigned>(r_code(d))) % 2 == 0 &&
                             std::popcount(static_cast<unsigned>(g_code(d))) % 2 == 0;
                    })});
  checks.push_back({"L and G run-width sets are disjoint", [] {
                      std::set<std::array<int, 4>> seen;
                      for (int d = 0; d < 10; ++d) {
                        seen.insert(pattern_runs(kLCodes[d]));
                        seen.insert(pattern_runs(g_code(d)));
                      }
                      return seen.size() == 20;
                    }()});

  std::set<std::array<Parity, 6>> distinct(kParityTable.begin(), kParityTable.end());
  checks.push_back({"parity table has 10 distinct entries", distinct.size() == 10});
  checks.push_back({"parity entries start odd", all_digits([](int d) {
                      return kParityTable[d][0] == Parity::odd;
                    })});
  checks.push_back({"parity entry 0 is all odd", std::all_of(kParityTable[0].begin(), kParityTable[0].end(),
                                                               [](Parity p) { return p == Parity::odd; })});
  checks.push_back({"parity entries 1-9 have exactly three even flags", [] {
                      for (int d = 1; d < 10; ++d) {
                        if (std::count(kParityTable[d].begin(), kParityTable[d].end(), Parity::even) != 3) {
                          return false;
                        }
                      }
                      return true;
                    }()});
  return checks;
}

}  // namespace pervascan
