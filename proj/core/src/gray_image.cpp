#include "pervascan/gray_image.hpp"

#include <string>

#include "pervascan/error.hpp"

namespace pervascan {

namespace {

void check_dimensions(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) {
    throw Error(Errc::invalid_argument, "image dimensions must be at least 1x1");
  }
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dimensions(width, height);
  pixels_.assign(width * height, fill);
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dimensions(width, height);
  if (pixels_.size() != width * height) {
    throw Error(Errc::invalid_argument,
                "pixel count " + std::to_string(pixels_.size()) + " does not match " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace pervascan
