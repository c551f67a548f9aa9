// SPDX-License-Identifier: Apache-2.0
//
// Mask kernels: OpenMP vs serial reference over full frames and the LED ROI.

#include <benchmark/benchmark.h>

#include "act/frame.hpp"
#include "act/sim.hpp"

namespace {

const act::Frame& scene() {
  static const act::Frame f = [] {
    act::SimConfig cfg;
    cfg.wheel.rpm = 60.0;
    cfg.pixel_noise = 4.0;
    return act::render_frame(cfg, act::FaultSpec::none(), 0.25);
  }();
  return f;
}

const act::Roi kFull{0, 0, 320, 240};

void BM_MaskParallel(benchmark::State& st) {
  const act::SimConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(act::apply_mask(scene(), cfg.led_range(), kFull));
  st.SetItemsProcessed(st.iterations() * kFull.w * kFull.h);
}

void BM_MaskSerial(benchmark::State& st) {
  const act::SimConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(act::apply_mask_serial(scene(), cfg.led_range(), kFull));
  st.SetItemsProcessed(st.iterations() * kFull.w * kFull.h);
}

void BM_CountActiveLedRoi(benchmark::State& st) {
  const act::SimConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(act::count_active(scene(), cfg.led_range(), cfg.led.roi));
}

}  // namespace

BENCHMARK(BM_MaskParallel);
BENCHMARK(BM_MaskSerial);
BENCHMARK(BM_CountActiveLedRoi);
BENCHMARK_MAIN();
