#pragma once

#include <cstddef>
#include <cstdint>

#include "pervascan/gray_image.hpp"

namespace pervascan {

/// Synthetic camera impairments. A default-constructed value is the identity.
struct Degradation {
  double noise_stddev = 0.0;
  std::size_t blur_radius = 0;
  /// Intensity delta ramping linearly from 0 at the left edge to this value at
  /// the right edge.
  double brightness_slope = 0.0;
  /// Clockwise-positive rotation about the image centre, |deg| <= 3.
  double rotation_deg = 0.0;
  std::uint64_t seed = 0;
};

/// Applies rotation (bilinear, replicate-border fill), box blur (window
/// 2r+1, clamped borders), brightness ramp and additive Gaussian noise, in
/// that order, clamping to [0,255]. Pure function of its arguments. Throws
/// Error(invalid_argument) for negative noise or |rotation| > 3.
GrayImage degrade(const GrayImage& image, const Degradation& d);

}  // namespace pervascan
