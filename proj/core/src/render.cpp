#include "pervascan/render.hpp"

#include <algorithm>

#include "pervascan/error.hpp"

namespace pervascan {

GrayImage render_modules(const std::bitset<kSymbolModules>& modules, const RenderSpec& spec) {
  if (spec.module_px == 0 || spec.bar_height_px == 0) {
    throw Error(Errc::invalid_argument, "module_px and bar_height_px must be at least 1");
  }
  if (spec.fg_level >= spec.bg_level) {
    throw Error(Errc::invalid_argument, "fg_level must be darker than bg_level");
  }
  const std::size_t width = (kSymbolModules + 2 * spec.quiet_modules) * spec.module_px;
  GrayImage image(width, spec.bar_height_px, spec.bg_level);

  auto first_row = image.row(0);
  const std::size_t left = spec.quiet_modules * spec.module_px;
  for (std::size_t m = 0; m < kSymbolModules; ++m) {
    if (!modules[m]) continue;
    auto begin = first_row.begin() + static_cast<std::ptrdiff_t>(left + m * spec.module_px);
    std::fill(begin, begin + static_cast<std::ptrdiff_t>(spec.module_px), spec.fg_level);
  }
  for (std::size_t y = 1; y < image.height(); ++y) {
    std::copy(first_row.begin(), first_row.end(), image.row(y).begin());
  }
  return image;
}

GrayImage render_ean13(const Ean13& code, const RenderSpec& spec) {
  return render_modules(encode_modules(code.digits()), spec);
}

}  // namespace pervascan
