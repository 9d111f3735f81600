#include "pervascan/pgm.hpp"

#include <string>

#include "pervascan/error.hpp"

namespace pervascan {

namespace {

constexpr std::size_t kMaxPixels = std::size_t{1} << 30;

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderReader {
public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t position() const { return pos_; }

  // Reads one unsigned decimal token, skipping whitespace and comments first.
  std::size_t next_number(const char* what) {
    skip_space_and_comments();
    std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > kMaxPixels) throw Error(Errc::bad_header, std::string(what) + " too large");
      ++pos_;
    }
    if (pos_ == start) throw Error(Errc::bad_header, std::string("missing or non-numeric ") + what);
    if (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') {
      throw Error(Errc::bad_header, std::string("non-numeric ") + what);
    }
    return value;
  }

  // The single whitespace octet separating maxval from the raster.
  void expect_separator() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw Error(Errc::bad_header, "missing whitespace after maxval");
    }
    ++pos_;
  }

private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(Errc::bad_magic, "not a binary PGM (expected magic P5)");
  }
  HeaderReader reader(bytes);
  const std::size_t width = reader.next_number("width");
  const std::size_t height = reader.next_number("height");
  const std::size_t maxval = reader.next_number("maxval");
  if (width == 0 || height == 0) throw Error(Errc::bad_header, "zero image dimension");
  if (width * height > kMaxPixels) throw Error(Errc::bad_header, "image too large");
  if (maxval != 255) {
    throw Error(Errc::unsupported_maxval, "maxval " + std::to_string(maxval) + " is not 255");
  }
  reader.expect_separator();

  const std::size_t count = width * height;
  const std::size_t offset = reader.position();
  if (bytes.size() - offset < count) {
    throw Error(Errc::truncated_payload, "expected " + std::to_string(count) + " payload octets, got " +
                                             std::to_string(bytes.size() - offset));
  }
  auto payload = bytes.subspan(offset, count);
  return GrayImage(width, height, std::vector<std::uint8_t>(payload.begin(), payload.end()));
}

std::vector<std::uint8_t> save_pgm(const GrayImage& image) {
  const std::string header =
      "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out;
  out.reserve(header.size() + image.size());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), image.pixels().begin(), image.pixels().end());
  return out;
}

}  // namespace pervascan
