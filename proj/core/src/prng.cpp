#include "pervascan/prng.hpp"

#include <cmath>
#include <numbers>

namespace pervascan {

double GaussianSource::next() noexcept {
  if (spare_) {
    double value = *spare_;
    spare_.reset();
    return value;
  }
  const double u1 = uniform_.next_unit();
  const double u2 = uniform_.next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

}  // namespace pervascan
