#include <gtest/gtest.h>

#include <random>

#include "pervascan/decoder.hpp"
#include "pervascan/degrade.hpp"
#include "pervascan/error.hpp"
#include "pervascan/render.hpp"
#include "test_support.hpp"

namespace pervascan {
namespace {

const Ean13 kCode = Ean13::parse("9780131103627");

template <typename Fn>
Errc error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::invalid_argument;
}

BitRow clean_row(const Ean13& code, std::size_t module_px, std::size_t quiet = 9) {
  const GrayImage image = render_ean13(code, {.module_px = module_px, .bar_height_px = 1, .quiet_modules = quiet});
  return binarize_row(image.row(0), 127);
}

BitRow row_from_text(const std::string& text) {
  BitRow row;
  for (char c : text) row.push_back(c == 'B' ? 1 : 0);
  return row;
}

TEST(Otsu, BimodalImageSeparatesClasses) {
  GrayImage image(10, 2, 255);
  for (std::size_t x = 0; x < 5; ++x) image.at(x, 0) = image.at(x, 1) = 0;
  const std::uint8_t t = otsu_threshold(image);
  EXPECT_LT(t, 255);
  const BitRow bits = binarize_row(image.row(0), t);
  EXPECT_EQ(std::count(bits.begin(), bits.end(), 1), 5);
}

TEST(Otsu, TwoLevelImagesGetThresholdStrictlyBetween) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> level(0, 255);
  for (int trial = 0; trial < 500; ++trial) {
    int lo = level(rng), hi = level(rng);
    if (lo > hi) std::swap(lo, hi);
    if (hi - lo < 2) continue;
    GrayImage image(8, 3, static_cast<std::uint8_t>(hi));
    const std::size_t dark = 1 + rng() % 20;
    for (std::size_t i = 0; i < dark; ++i) image.at(i % 8, i / 8) = static_cast<std::uint8_t>(lo);
    const int t = otsu_threshold(image);
    EXPECT_GT(t, lo);
    EXPECT_LT(t, hi);
  }
}

TEST(Otsu, UniformImageHasNoContrast) {
  EXPECT_EQ(error_of([] { otsu_threshold(GrayImage(4, 4, 128)); }), Errc::no_contrast);
}

TEST(Otsu, PrefersSmallerThresholdOnDistinctTies) {
  // Symmetric three-level histogram: t=0 and t=127 split {0 | 127,255} and
  // {0,127 | 255} with equal between-class variance.
  GrayImage image(3, 1, std::vector<std::uint8_t>{0, 127, 254});
  EXPECT_EQ(otsu_threshold(image), 63);
}

TEST(Otsu, BinarizeRecoversRenderedBits) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Ean13 code = testing::random_code(rng);
    const GrayImage image = render_ean13(code, {.module_px = 2, .bar_height_px = 3, .quiet_modules = 9});
    const auto modules = encode_modules(code.digits());
    const BitRow bits = binarize_row(image.row(1), otsu_threshold(image));
    for (std::size_t x = 0; x < bits.size(); ++x) {
      const std::size_t m = x / 2;
      const bool expected = m >= 9 && m < 104 && modules[m - 9];
      ASSERT_EQ(bits[x] == 1, expected);
    }
  }
}

TEST(RunLengths, Examples) {
  auto seq = run_lengths(row_from_text("WWWBBB"));
  EXPECT_FALSE(seq.starts_dark);
  EXPECT_EQ(seq.runs, (std::vector<std::size_t>{3, 3}));
  seq = run_lengths(row_from_text("B"));
  EXPECT_TRUE(seq.starts_dark);
  EXPECT_EQ(seq.runs, (std::vector<std::size_t>{1}));
  seq = run_lengths(row_from_text("BWBWB"));
  EXPECT_EQ(seq.runs, (std::vector<std::size_t>{1, 1, 1, 1, 1}));
}

TEST(RunLengths, RunsSumToWidthAndAlternate) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    BitRow row(1 + rng() % 300);
    for (auto& b : row) b = rng() % 2;
    const auto seq = run_lengths(row);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < seq.runs.size(); ++i) {
      ASSERT_GE(seq.runs[i], 1u);
      for (std::size_t k = 0; k < seq.runs[i]; ++k) ASSERT_EQ(row[pos + k] == 1, seq.dark(i));
      pos += seq.runs[i];
    }
    EXPECT_EQ(pos, row.size());
  }
}

TEST(LocateSymbol, CleanScanline) {
  const auto window = locate_symbol(run_lengths(clean_row(kCode, 3)));
  EXPECT_DOUBLE_EQ(window.module_width, 3.0);
  EXPECT_EQ(window.first_run, 1u);
  EXPECT_EQ(window.runs[0], 3u);
}

TEST(LocateSymbol, RejectsBlankAndGuardOnlyRows) {
  EXPECT_EQ(error_of([] { locate_symbol(run_lengths(BitRow(300, 0))); }), Errc::no_barcode_found);
  EXPECT_EQ(error_of([] { locate_symbol(run_lengths(row_from_text("WWWWWWWWWWBWBWWWWWWWWWW"))); }),
            Errc::no_barcode_found);
}

TEST(LocateSymbol, RequiresQuietMargin) {
  // Two-module margin is below the three-module minimum.
  EXPECT_EQ(error_of([] { locate_symbol(run_lengths(clean_row(kCode, 3, 2))); }), Errc::no_barcode_found);
  EXPECT_NO_THROW(locate_symbol(run_lengths(clean_row(kCode, 3, 3))));
}

TEST(ClassifyDigit, Examples) {
  const std::size_t m = 3;
  const std::vector<std::size_t> zero{3 * m, 2 * m, 1 * m, 1 * m};
  EXPECT_EQ(classify_digit(zero, m, Side::left), (DigitRead{0, Parity::odd, 0.0}));
  const std::vector<std::size_t> six{m, m, m, 4 * m};
  EXPECT_EQ(classify_digit(six, m, Side::left), (DigitRead{6, Parity::odd, 0.0}));
  const std::vector<std::size_t> g_zero{m, m, 2 * m, 3 * m};
  EXPECT_EQ(classify_digit(g_zero, m, Side::left).parity, Parity::even);
  EXPECT_EQ(classify_digit(zero, m, Side::right).digit, 0);
  const std::vector<std::size_t> malformed{7 * m, m, m, m};
  EXPECT_EQ(error_of([&] { classify_digit(malformed, m, Side::left); }), Errc::digit_unreadable);
}

TEST(ClassifyDigit, ExhaustiveOverCodeTables) {
  for (std::size_t m : {1u, 2u, 3u, 5u}) {
    for (int d = 0; d < 10; ++d) {
      auto runs_of = [m](DigitPattern p) {
        std::vector<std::size_t> out;
        for (int r : pattern_runs(p)) out.push_back(static_cast<std::size_t>(r) * m);
        return out;
      };
      EXPECT_EQ(classify_digit(runs_of(kLCodes[d]), m, Side::left), (DigitRead{d, Parity::odd, 0.0}));
      EXPECT_EQ(classify_digit(runs_of(g_code(d)), m, Side::left), (DigitRead{d, Parity::even, 0.0}));
      EXPECT_EQ(classify_digit(runs_of(r_code(d)), m, Side::right), (DigitRead{d, Parity::even, 0.0}));
    }
  }
}

TEST(ParityTable, Lookup) {
  using P = Parity;
  EXPECT_EQ(parity_to_first_digit(std::array{P::odd, P::odd, P::odd, P::odd, P::odd, P::odd}), 0);
  EXPECT_EQ(parity_to_first_digit(std::array{P::odd, P::odd, P::even, P::odd, P::even, P::even}), 1);
  EXPECT_EQ(error_of([] {
              parity_to_first_digit(std::array{P::odd, P::even, P::even, P::even, P::even, P::even});
            }),
            Errc::unknown_parity_pattern);
}

TEST(DecodeScanline, ForwardAndReversed) {
  const BitRow row = clean_row(kCode, 3);
  const auto forward = decode_scanline(row);
  EXPECT_EQ(forward.code, kCode);
  EXPECT_FALSE(forward.reversed);
  const BitRow reversed(row.rbegin(), row.rend());
  const auto backward = decode_scanline(reversed);
  EXPECT_EQ(backward.code, kCode);
  EXPECT_TRUE(backward.reversed);
}

TEST(DecodeScanline, MisrenderedCheckDigitIsChecksumMismatch) {
  auto digits = kCode.digits();
  digits[12] = 0;
  const GrayImage image = render_modules(encode_modules(digits), {.module_px = 3, .bar_height_px = 1});
  const BitRow row = binarize_row(image.row(0), 127);
  EXPECT_EQ(error_of([&] { decode_scanline(row); }), Errc::checksum_mismatch);
  const BitRow reversed(row.rbegin(), row.rend());
  EXPECT_EQ(error_of([&] { decode_scanline(reversed); }), Errc::checksum_mismatch);
}

TEST(DecodeScanline, ReversalInvarianceOnRandomCodes) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const Ean13 code = testing::random_code(rng);
    const BitRow row = clean_row(code, 1 + trial % 4);
    const auto forward = decode_scanline(row);
    const BitRow reversed(row.rbegin(), row.rend());
    const auto backward = decode_scanline(reversed);
    ASSERT_EQ(forward.code, code);
    ASSERT_EQ(backward.code, code);
    ASSERT_NE(forward.reversed, backward.reversed);
  }
}

TEST(DecodeScanline, NeverEmitsInvalidCodeOnRandomRows) {
  // Soundness: arbitrary rows either fail or produce a checksum-valid code.
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 2000; ++trial) {
    BitRow row = clean_row(testing::random_code(rng), 2);
    const std::size_t flips = rng() % 6;
    for (std::size_t i = 0; i < flips; ++i) row[rng() % row.size()] ^= 1;
    try {
      const auto result = decode_scanline(row);
      EXPECT_TRUE(validate(result.code.str()));
    } catch (const Error&) {
    }
  }
}

TEST(DecodeImage, CleanRenderAgreesOnAllScanlines) {
  const auto report = decode_image(render_ean13(kCode, {.module_px = 3, .bar_height_px = 60}));
  EXPECT_EQ(report.code, kCode);
  EXPECT_EQ(report.scanlines_attempted, 7u);
  EXPECT_EQ(report.scanlines_agreeing, 7u);
  EXPECT_FALSE(report.reversed);
}

TEST(DecodeImage, UniformImageHasNoContrast) {
  EXPECT_EQ(error_of([] { decode_image(GrayImage(100, 40, 128)); }), Errc::no_contrast);
}

TEST(DecodeImage, ImageWithoutSymbol) {
  GrayImage image(100, 40, 255);
  for (std::size_t y = 0; y < 40; ++y) image.at(50, y) = 0;
  EXPECT_EQ(error_of([&] { decode_image(image); }), Errc::no_barcode_found);
}

TEST(DecodeImage, DegradedRenderStillDecodes) {
  const GrayImage image = render_ean13(kCode, {.module_px = 3, .bar_height_px = 60});
  const auto report = decode_image(degrade(image, {.noise_stddev = 20, .blur_radius = 1, .seed = 42}));
  EXPECT_EQ(report.code, kCode);
  EXPECT_GE(report.scanlines_agreeing, 1u);
}

TEST(DecodeImage, ScanlinesCoverMiddleEightyPercent) {
  EXPECT_EQ(scanline_rows(60, 7), (std::vector<std::size_t>{9, 16, 23, 30, 36, 43, 50}));
  EXPECT_EQ(scanline_rows(1, 3), (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_EQ(scanline_rows(100, 1), (std::vector<std::size_t>{50}));
}

TEST(DecodeImage, RoundTripAcrossModuleSizes) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const Ean13 code = testing::random_code(rng);
    const std::size_t module_px = std::array<std::size_t, 3>{2, 3, 5}[trial % 3];
    const auto report = decode_image(render_ean13(code, {.module_px = module_px, .bar_height_px = 20}));
    ASSERT_EQ(report.code, code);
  }
}

}  // namespace
}  // namespace pervascan
