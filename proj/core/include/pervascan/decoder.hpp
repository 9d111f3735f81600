#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pervascan/ean13.hpp"
#include "pervascan/gray_image.hpp"
#include "pervascan/patterns.hpp"

namespace pervascan {

/// Binarized scanline: 1 = dark (bar), 0 = light (space).
using BitRow = std::vector<std::uint8_t>;

/// Maximum L1 distance, in modules over the four runs, for a digit match.
inline constexpr double kDigitTolerance = 1.4;
/// Allowed relative deviation of each guard run from one module.
inline constexpr double kGuardTolerance = 0.4;
/// Minimum light margin, in modules, on either side of the symbol.
inline constexpr double kMinQuietModules = 3.0;
/// Runs in an aligned EAN-13 window: 3 + 6*4 + 5 + 6*4 + 3.
inline constexpr std::size_t kSymbolRuns = 59;

/// Otsu's global threshold over the 256-bin histogram; pixels <= t are dark.
/// Ties between distinct variances resolve to the smaller t; a flat run of
/// equal variance across empty bins resolves to its midpoint. Throws
/// Error(no_contrast) when every pixel has the same value.
std::uint8_t otsu_threshold(const GrayImage& image);

BitRow binarize_row(std::span<const std::uint8_t> row, std::uint8_t threshold);

struct RunSequence {
  bool starts_dark = false;
  std::vector<std::size_t> runs;

  bool dark(std::size_t index) const { return starts_dark == (index % 2 == 0); }
};

RunSequence run_lengths(std::span<const std::uint8_t> row);

struct SymbolWindow {
  /// Index into RunSequence::runs of the first start-guard bar.
  std::size_t first_run = 0;
  /// Mean width of the six start/end guard runs, in pixels.
  double module_width = 0.0;
  std::array<std::size_t, kSymbolRuns> runs{};
};

/// Finds the first run position that frames a full EAN-13 symbol: a light
/// margin of at least kMinQuietModules before a 1:1:1 start guard, a 1:1:1:1:1
/// middle guard 27 runs later, and an end guard followed by a light margin or
/// the end of the line. Throws Error(no_barcode_found).
SymbolWindow locate_symbol(const RunSequence& runs);

enum class Side { left, right };

struct DigitRead {
  int digit = 0;
  Parity parity = Parity::odd;
  double distance = 0.0;

  friend bool operator==(const DigitRead&, const DigitRead&) = default;
};

/// Matches four run widths (starting light on the left half, dark on the
/// right half) against the L and G codes or the R codes. Throws
/// Error(digit_unreadable) when nothing is within kDigitTolerance, or when the
/// group width is far from seven modules of `module_width`.
DigitRead classify_digit(std::span<const std::size_t> runs, double module_width, Side side);

/// Leading digit implied by the parities of the six left-half digits.
/// Throws Error(unknown_parity_pattern).
int parity_to_first_digit(std::span<const Parity, 6> parities);

struct ScanlineResult {
  Ean13 code;
  bool reversed = false;
};

/// Decodes one binarized scanline, retrying right-to-left when the forward
/// read fails. Throws Error with no_barcode_found, digit_unreadable,
/// unknown_parity_pattern or checksum_mismatch.
ScanlineResult decode_scanline(std::span<const std::uint8_t> row);

struct DecodeReport {
  Ean13 code;
  std::size_t scanlines_attempted = 0;
  std::size_t scanlines_agreeing = 0;
  bool reversed = false;
};

inline constexpr std::size_t kDefaultScanlines = 7;

/// Rows sampled by decode_image: n evenly spaced rows across the middle 80%
/// of the image height, top to bottom.
std::vector<std::size_t> scanline_rows(std::size_t height, std::size_t count);

/// Otsu-binarizes the image, decodes each sampled row and returns the most
/// frequent code (ties go to the topmost row). Throws Error(no_contrast) or
/// Error(no_barcode_found).
DecodeReport decode_image(const GrayImage& image, std::size_t scanlines = kDefaultScanlines);

}  // namespace pervascan
