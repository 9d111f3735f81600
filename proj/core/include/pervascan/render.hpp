#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>

#include "pervascan/ean13.hpp"
#include "pervascan/gray_image.hpp"
#include "pervascan/patterns.hpp"

namespace pervascan {

struct RenderSpec {
  std::size_t module_px = 3;
  std::size_t bar_height_px = 60;
  std::size_t quiet_modules = 9;
  std::uint8_t fg_level = 0;
  std::uint8_t bg_level = 255;
};

/// Draws a clean symbol: (95 + 2*quiet) * module_px wide, bar_height_px tall.
/// Bit i of `modules` is the i-th module from the left. Throws
/// Error(invalid_argument) on a zero size or fg_level >= bg_level.
GrayImage render_modules(const std::bitset<kSymbolModules>& modules, const RenderSpec& spec);

/// render_modules(encode_modules(code)). The Ean13 type guarantees the
/// check digit, so InvalidCode surfaces at Ean13::parse.
GrayImage render_ean13(const Ean13& code, const RenderSpec& spec);

}  // namespace pervascan
