#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pervascan {

/// 8-bit grayscale raster, row-major, 0 = black and 255 = white.
class GrayImage {
public:
  /// Filled with `fill`. Throws Error(invalid_argument) on a zero dimension.
  GrayImage(std::size_t width, std::size_t height, std::uint8_t fill = 255);
  /// Takes ownership of `pixels`; its size must equal width * height.
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::uint8_t at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  std::uint8_t& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }

  std::span<const std::uint8_t> row(std::size_t y) const {
    return {pixels_.data() + y * width_, width_};
  }
  std::span<std::uint8_t> row(std::size_t y) { return {pixels_.data() + y * width_, width_}; }

  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> pixels_;
};

}  // namespace pervascan
