#include "pervascan/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>

#include "pervascan/error.hpp"

namespace pervascan {

namespace {

bool near_module(double width, double module) {
  return std::abs(width - module) <= kGuardTolerance * module;
}

// Position of a failure along the decode pipeline; used to pick which of the
// forward and reversed errors to report.
int stage_rank(Errc code) {
  switch (code) {
    case Errc::no_barcode_found: return 0;
    case Errc::digit_unreadable: return 1;
    case Errc::unknown_parity_pattern: return 2;
    case Errc::checksum_mismatch: return 3;
    default: return -1;
  }
}

Ean13 decode_runs(const RunSequence& runs) {
  const SymbolWindow window = locate_symbol(runs);
  const auto& w = window.runs;

  std::string text(13, '0');
  std::array<Parity, 6> parities{};
  for (std::size_t i = 0; i < 6; ++i) {
    const DigitRead read =
        classify_digit(std::span(w).subspan(3 + 4 * i, 4), window.module_width, Side::left);
    text[1 + i] = static_cast<char>('0' + read.digit);
    parities[i] = read.parity;
  }
  for (std::size_t i = 0; i < 6; ++i) {
    const DigitRead read =
        classify_digit(std::span(w).subspan(32 + 4 * i, 4), window.module_width, Side::right);
    text[7 + i] = static_cast<char>('0' + read.digit);
  }
  text[0] = static_cast<char>('0' + parity_to_first_digit(parities));

  if (!validate(text)) {
    throw Error(Errc::checksum_mismatch, "check digit mismatch in " + text);
  }
  return Ean13::parse(text);
}

}  // namespace

std::uint8_t otsu_threshold(const GrayImage& image) {
  std::array<std::uint64_t, 256> histogram{};
  for (std::uint8_t v : image.pixels()) ++histogram[v];

  const auto total = static_cast<long double>(image.size());
  long double total_sum = 0;
  for (int level = 0; level < 256; ++level) total_sum += static_cast<long double>(level) * histogram[level];

  std::optional<int> best;
  long double best_score = -1;
  std::uint64_t dark_count = 0;
  long double dark_sum = 0;
  for (int t = 0; t < 255; ++t) {
    dark_count += histogram[t];
    dark_sum += static_cast<long double>(t) * histogram[t];
    if (dark_count == 0 || dark_count == image.size()) continue;
    const auto w0 = static_cast<long double>(dark_count);
    const long double diff = total_sum * w0 - dark_sum * total;
    // Between-class variance up to the constant factor 1/total^2.
    const long double score = diff * diff / (w0 * (total - w0));
    if (score > best_score) {
      best_score = score;
      best = t;
    }
  }
  if (!best) throw Error(Errc::no_contrast, "image has a single intensity level");

  int plateau_end = *best;
  while (plateau_end + 1 < 255 && histogram[plateau_end + 1] == 0) ++plateau_end;
  return static_cast<std::uint8_t>((*best + plateau_end + 1) / 2);
}

BitRow binarize_row(std::span<const std::uint8_t> row, std::uint8_t threshold) {
  BitRow bits(row.size());
  std::transform(row.begin(), row.end(), bits.begin(),
                 [threshold](std::uint8_t v) { return static_cast<std::uint8_t>(v <= threshold); });
  return bits;
}

RunSequence run_lengths(std::span<const std::uint8_t> row) {
  RunSequence seq;
  if (row.empty()) return seq;
  seq.starts_dark = row[0] != 0;
  std::size_t length = 1;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if ((row[i] != 0) == (row[i - 1] != 0)) {
      ++length;
    } else {
      seq.runs.push_back(length);
      length = 1;
    }
  }
  seq.runs.push_back(length);
  return seq;
}

SymbolWindow locate_symbol(const RunSequence& seq) {
  const auto& runs = seq.runs;
  for (std::size_t i = 1; i + kSymbolRuns <= runs.size(); ++i) {
    if (!seq.dark(i)) continue;

    const double start_module = (runs[i] + runs[i + 1] + runs[i + 2]) / 3.0;
    if (!near_module(runs[i], start_module) || !near_module(runs[i + 1], start_module) ||
        !near_module(runs[i + 2], start_module)) {
      continue;
    }
    if (runs[i - 1] < kMinQuietModules * start_module) continue;

    const std::size_t end = i + kSymbolRuns - 3;
    const double module =
        (runs[i] + runs[i + 1] + runs[i + 2] + runs[end] + runs[end + 1] + runs[end + 2]) / 6.0;
    bool guards_ok = true;
    for (std::size_t k : {i, i + 1, i + 2, end, end + 1, end + 2, i + 27, i + 28, i + 29, i + 30, i + 31}) {
      guards_ok = guards_ok && near_module(runs[k], module);
    }
    if (!guards_ok) continue;

    const std::size_t after = i + kSymbolRuns;
    if (after < runs.size() && runs[after] < kMinQuietModules * module) continue;

    SymbolWindow window;
    window.first_run = i;
    window.module_width = module;
    std::copy_n(runs.begin() + static_cast<std::ptrdiff_t>(i), kSymbolRuns, window.runs.begin());
    return window;
  }
  throw Error(Errc::no_barcode_found, "no EAN-13 guard pattern found");
}

DigitRead classify_digit(std::span<const std::size_t> runs, double module_width, Side side) {
  if (runs.size() != 4) throw Error(Errc::digit_unreadable, "a digit spans exactly four runs");
  const double total = std::accumulate(runs.begin(), runs.end(), 0.0);
  if (module_width > 0.0) {
    const double expected = kDigitModules * module_width;
    if (total < 0.5 * expected || total > 1.5 * expected) {
      throw Error(Errc::digit_unreadable, "digit width far from seven modules");
    }
  }
  const double scale = kDigitModules / total;

  DigitRead best{-1, Parity::odd, 1e9};
  auto consider = [&](DigitPattern pattern, int digit, Parity parity) {
    const auto reference = pattern_runs(pattern);
    double distance = 0.0;
    for (std::size_t k = 0; k < 4; ++k) distance += std::abs(runs[k] * scale - reference[k]);
    if (distance < best.distance) best = {digit, parity, distance};
  };
  for (int d = 0; d < 10; ++d) {
    if (side == Side::left) {
      consider(kLCodes[d], d, Parity::odd);
      consider(g_code(d), d, Parity::even);
    } else {
      consider(r_code(d), d, Parity::even);
    }
  }
  if (best.distance > kDigitTolerance) {
    throw Error(Errc::digit_unreadable, "no digit pattern within tolerance");
  }
  return best;
}

int parity_to_first_digit(std::span<const Parity, 6> parities) {
  for (int d = 0; d < 10; ++d) {
    if (std::equal(parities.begin(), parities.end(), kParityTable[d].begin())) return d;
  }
  throw Error(Errc::unknown_parity_pattern, "left-half parity pattern not in table");
}

ScanlineResult decode_scanline(std::span<const std::uint8_t> row) {
  std::optional<Error> forward_error;
  try {
    return {decode_runs(run_lengths(row)), false};
  } catch (const Error& e) {
    if (stage_rank(e.code()) < 0) throw;
    forward_error = e;
  }

  BitRow reversed(row.rbegin(), row.rend());
  try {
    return {decode_runs(run_lengths(reversed)), true};
  } catch (const Error& e) {
    if (stage_rank(e.code()) < 0) throw;
    if (stage_rank(e.code()) > stage_rank(forward_error->code())) throw;
  }
  throw *forward_error;
}

std::vector<std::size_t> scanline_rows(std::size_t height, std::size_t count) {
  std::vector<std::size_t> rows;
  rows.reserve(count);
  const double top = 0.1 * static_cast<double>(height);
  const double span = 0.8 * static_cast<double>(height);
  for (std::size_t k = 0; k < count; ++k) {
    const double y = top + (static_cast<double>(k) + 0.5) * span / static_cast<double>(count);
    rows.push_back(std::min(static_cast<std::size_t>(y), height - 1));
  }
  return rows;
}

DecodeReport decode_image(const GrayImage& image, std::size_t scanlines) {
  if (scanlines == 0) throw Error(Errc::invalid_argument, "at least one scanline is required");
  const std::uint8_t threshold = otsu_threshold(image);

  struct Tally {
    std::size_t votes = 0;
    std::size_t first_row_index = 0;
    bool reversed = false;
  };
  std::map<Ean13, Tally> tallies;
  const auto rows = scanline_rows(image.height(), scanlines);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    try {
      const ScanlineResult result = decode_scanline(binarize_row(image.row(rows[k]), threshold));
      auto [it, inserted] = tallies.try_emplace(result.code, Tally{0, k, result.reversed});
      ++it->second.votes;
    } catch (const Error&) {
      // A failed scanline only lowers the agreement count.
    }
  }
  if (tallies.empty()) throw Error(Errc::no_barcode_found, "no scanline decoded");

  auto winner = std::max_element(tallies.begin(), tallies.end(), [](const auto& a, const auto& b) {
    if (a.second.votes != b.second.votes) return a.second.votes < b.second.votes;
    return a.second.first_row_index > b.second.first_row_index;
  });
  return {winner->first, rows.size(), winner->second.votes, winner->second.reversed};
}

}  // namespace pervascan
