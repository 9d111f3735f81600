#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pervascan/gray_image.hpp"

namespace pervascan {

/// Parses a binary PGM ("P5", maxval 255). Header tokens are separated by
/// whitespace and may be interleaved with '#' comment lines; exactly one
/// whitespace octet separates the maxval from the payload. Trailing octets
/// after width*height are ignored.
///
/// Errors: bad_magic, bad_header, unsupported_maxval, truncated_payload.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

/// Emits "P5\n<w> <h>\n255\n" followed by the raw pixels.
std::vector<std::uint8_t> save_pgm(const GrayImage& image);

}  // namespace pervascan
