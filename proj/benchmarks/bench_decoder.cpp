#include <benchmark/benchmark.h>

#include "pervascan/decoder.hpp"
#include "pervascan/degrade.hpp"
#include "pervascan/ean13.hpp"
#include "pervascan/pgm.hpp"
#include "pervascan/render.hpp"

namespace {

using namespace pervascan;

const Ean13 kCode = Ean13::parse("9780131103627");

GrayImage rendered(std::size_t module_px) {
  RenderSpec spec;
  spec.module_px = module_px;
  return render_ean13(kCode, spec);
}

void BM_DecodeClean(benchmark::State& state) {
  const GrayImage image = rendered(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decode_image(image));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * image.size()));
}
BENCHMARK(BM_DecodeClean)->Arg(2)->Arg(3)->Arg(5);

void BM_DecodeDegraded(benchmark::State& state) {
  Degradation d;
  d.noise_stddev = 20;
  d.blur_radius = 1;
  d.brightness_slope = 30;
  d.seed = 7;
  const GrayImage image = degrade(rendered(3), d);
  for (auto _ : state) benchmark::DoNotOptimize(decode_image(image));
}
BENCHMARK(BM_DecodeDegraded);

void BM_DecodeScanline(benchmark::State& state) {
  const GrayImage image = rendered(3);
  const BitRow row = binarize_row(image.row(image.height() / 2), otsu_threshold(image));
  for (auto _ : state) benchmark::DoNotOptimize(decode_scanline(row));
}
BENCHMARK(BM_DecodeScanline);

void BM_Otsu(benchmark::State& state) {
  Degradation d;
  d.noise_stddev = 20;
  const GrayImage image = degrade(rendered(3), d);
  for (auto _ : state) benchmark::DoNotOptimize(otsu_threshold(image));
}
BENCHMARK(BM_Otsu);

void BM_Render(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rendered(3));
}
BENCHMARK(BM_Render);

void BM_Degrade(benchmark::State& state) {
  const GrayImage image = rendered(3);
  Degradation d;
  d.noise_stddev = 20;
  d.blur_radius = 1;
  d.brightness_slope = 30;
  d.rotation_deg = 2;
  for (auto _ : state) benchmark::DoNotOptimize(degrade(image, d));
}
BENCHMARK(BM_Degrade);

void BM_PgmRoundTrip(benchmark::State& state) {
  const GrayImage image = rendered(3);
  for (auto _ : state) benchmark::DoNotOptimize(load_pgm(save_pgm(image)));
}
BENCHMARK(BM_PgmRoundTrip);

void BM_Checksum(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(validate("9780131103627"));
}
BENCHMARK(BM_Checksum);

}  // namespace

BENCHMARK_MAIN();
