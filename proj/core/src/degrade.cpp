#include "pervascan/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pervascan/error.hpp"
#include "pervascan/prng.hpp"

namespace pervascan {

namespace {

using Plane = std::vector<double>;

Plane rotate(const Plane& src, std::size_t w, std::size_t h, double degrees) {
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx = (static_cast<double>(w) - 1.0) / 2.0;
  const double cy = (static_cast<double>(h) - 1.0) / 2.0;
  const double max_x = static_cast<double>(w - 1);
  const double max_y = static_cast<double>(h - 1);
  auto sample = [&](std::size_t x, std::size_t y) { return src[y * w + x]; };

  Plane out(w * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      // Inverse mapping: rotate the destination point back by -theta.
      const double sx = std::clamp(cx + c * dx + s * dy, 0.0, max_x);
      const double sy = std::clamp(cy - s * dx + c * dy, 0.0, max_y);
      const auto x0 = static_cast<std::size_t>(sx);
      const auto y0 = static_cast<std::size_t>(sy);
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const std::size_t y1 = std::min(y0 + 1, h - 1);
      const double fx = sx - static_cast<double>(x0);
      const double fy = sy - static_cast<double>(y0);
      const double top = sample(x0, y0) * (1 - fx) + sample(x1, y0) * fx;
      const double bottom = sample(x0, y1) * (1 - fx) + sample(x1, y1) * fx;
      out[y * w + x] = top * (1 - fy) + bottom * fy;
    }
  }
  return out;
}

// One pass of a clamped-border moving average along rows (stride 1) or
// columns (stride w).
Plane box_pass(const Plane& src, std::size_t w, std::size_t h, std::size_t radius, bool horizontal) {
  Plane out(src.size());
  const auto r = static_cast<std::ptrdiff_t>(radius);
  const double window = static_cast<double>(2 * radius + 1);
  const std::size_t lines = horizontal ? h : w;
  const std::size_t length = horizontal ? w : h;
  const auto last = static_cast<std::ptrdiff_t>(length) - 1;
  for (std::size_t line = 0; line < lines; ++line) {
    auto at = [&](std::ptrdiff_t i) -> double {
      const auto k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, last));
      return horizontal ? src[line * w + k] : src[k * w + line];
    };
    for (std::size_t i = 0; i < length; ++i) {
      double sum = 0.0;
      for (std::ptrdiff_t k = -r; k <= r; ++k) sum += at(static_cast<std::ptrdiff_t>(i) + k);
      const std::size_t idx = horizontal ? line * w + i : i * w + line;
      out[idx] = sum / window;
    }
  }
  return out;
}

}  // namespace

GrayImage degrade(const GrayImage& image, const Degradation& d) {
  if (!(d.noise_stddev >= 0.0)) throw Error(Errc::invalid_argument, "noise_stddev must be >= 0");
  if (!(std::abs(d.rotation_deg) <= 3.0)) throw Error(Errc::invalid_argument, "rotation limited to +/-3 degrees");

  const std::size_t w = image.width();
  const std::size_t h = image.height();
  Plane plane(image.pixels().begin(), image.pixels().end());

  if (d.rotation_deg != 0.0) plane = rotate(plane, w, h, d.rotation_deg);
  if (d.blur_radius > 0) {
    plane = box_pass(plane, w, h, d.blur_radius, true);
    plane = box_pass(plane, w, h, d.blur_radius, false);
  }
  if (d.brightness_slope != 0.0 && w > 1) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        plane[y * w + x] += d.brightness_slope * static_cast<double>(x) / static_cast<double>(w - 1);
      }
    }
  }
  if (d.noise_stddev > 0.0) {
    GaussianSource gauss(d.seed);
    for (double& v : plane) v += d.noise_stddev * gauss.next();
  }

  std::vector<std::uint8_t> out(plane.size());
  std::transform(plane.begin(), plane.end(), out.begin(), [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  });
  return GrayImage(w, h, std::move(out));
}

}  // namespace pervascan
