// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "act/error.hpp"
#include "act/frame.hpp"
#include "hsv_oracle.hpp"

namespace {

using act::Frame;
using act::HsvRange;
using act::Rgb;
using act::Roi;

TEST(Hsv, PublishedTableValues) {
  struct Row {
    Rgb rgb;
    double h, s, v;
  } rows[] = {
      {{0, 0, 0}, 0, 0, 0},          {{255, 255, 255}, 0, 0, 1},     {{255, 0, 0}, 0, 1, 1},
      {{0, 255, 0}, 120, 1, 1},      {{0, 0, 255}, 240, 1, 1},       {{255, 255, 0}, 60, 1, 1},
      {{0, 255, 255}, 180, 1, 1},    {{255, 0, 255}, 300, 1, 1},     {{128, 128, 128}, 0, 0, 128.0 / 255},
      {{128, 0, 0}, 0, 1, 128.0 / 255}, {{0, 128, 128}, 180, 1, 128.0 / 255}, {{128, 0, 128}, 300, 1, 128.0 / 255},
  };
  for (const auto& r : rows) {
    const auto hsv = act::rgb_to_hsv(r.rgb);
    EXPECT_EQ(hsv.hue, r.h);
    EXPECT_EQ(hsv.sat, r.s);
    EXPECT_EQ(hsv.val, r.v);
  }
}

TEST(Hsv, MatchesRationalOracleExactly) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> d(0, 255);
  for (int i = 0; i < 1000; ++i) {
    const auto r = static_cast<std::uint8_t>(d(rng));
    const auto g = static_cast<std::uint8_t>(d(rng));
    const auto b = static_cast<std::uint8_t>(d(rng));
    const auto got = act::rgb_to_hsv(r, g, b);
    const auto want = oracle::hsv(r, g, b);
    ASSERT_EQ(got.hue, want.hue) << int(r) << "," << int(g) << "," << int(b);
    ASSERT_EQ(got.sat, want.sat);
    ASSERT_EQ(got.val, want.val);
  }
}

TEST(Hsv, HueAlwaysInHalfOpenCircle) {
  for (int r = 0; r < 256; r += 5)
    for (int g = 0; g < 256; g += 5)
      for (int b = 0; b < 256; b += 5) {
        const auto h = act::rgb_to_hsv(r, g, b).hue;
        ASSERT_GE(h, 0.0);
        ASSERT_LT(h, 360.0);
      }
}

TEST(Hsv, RoundTripsThroughRgb) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(0, 255);
  for (int i = 0; i < 2000; ++i) {
    const Rgb c{static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng))};
    EXPECT_EQ(act::hsv_to_rgb(act::rgb_to_hsv(c)), c);
  }
}

TEST(HsvRange, WrapsThroughZero) {
  HsvRange red{340, 20, 0.5, 1, 0.5, 1};
  EXPECT_TRUE(red.hue_contains(350));
  EXPECT_TRUE(red.hue_contains(0));
  EXPECT_TRUE(red.hue_contains(19.9));
  EXPECT_FALSE(red.hue_contains(180));
  HsvRange bad{0, 10, 0.8, 0.2, 0, 1};
  EXPECT_THROW(bad.validate(), act::Error);
}

Frame checker(int w, int h, std::uint64_t seed) {
  Frame f(w, h);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, 255);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      f.set(x, y, {static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng))});
  return f;
}

TEST(Mask, ParallelKernelMatchesSerialReference) {
  const Frame f = checker(320, 240, 11);
  const HsvRange ranges[] = {{340, 20, 0.3, 1, 0.3, 1}, {100, 140, 0, 1, 0, 1}, {0, 359.999, 0, 1, 0, 1}};
  const Roi rois[] = {{0, 0, 320, 240}, {13, 7, 101, 77}, {319, 239, 1, 1}};
  for (const auto& r : ranges)
    for (const auto& roi : rois) {
      const auto par = act::apply_mask(f, r, roi);
      const auto ser = act::apply_mask_serial(f, r, roi);
      EXPECT_EQ(par, ser);
      EXPECT_EQ(act::count_active(f, r, roi), ser.active_count());
    }
}

TEST(Mask, ActiveCountEqualsBitSum) {
  const Frame f = checker(64, 48, 5);
  const auto m = act::apply_mask(f, {0, 180, 0.2, 1, 0.2, 1}, {0, 0, 64, 48});
  const auto bits = m.bits();
  EXPECT_EQ(m.active_count(), static_cast<std::size_t>(std::accumulate(bits.begin(), bits.end(), 0)));
}

TEST(Mask, RoiOutOfBoundsIsRejected) {
  const Frame f(32, 32);
  const HsvRange any{};
  for (const Roi& roi : {Roi{-1, 0, 4, 4}, Roi{0, 0, 33, 4}, Roi{30, 30, 3, 1}, Roi{0, 0, 0, 4}}) {
    try {
      (void)act::apply_mask(f, any, roi);
      FAIL() << "expected RoiOutOfBounds";
    } catch (const act::Error& e) {
      EXPECT_EQ(e.code(), act::ErrorCode::RoiOutOfBounds);
    }
  }
}

TEST(Centroid, DiskCentreIsRecovered) {
  Frame f(40, 40);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 40; ++x)
      if ((x - 22) * (x - 22) + (y - 17) * (y - 17) <= 16) f.set(x, y, {255, 0, 0});
  const auto m = act::apply_mask(f, {350, 10, 0.5, 1, 0.5, 1}, {10, 5, 25, 25});
  const auto c = act::centroid(m);
  ASSERT_TRUE(c);
  EXPECT_DOUBLE_EQ(c->x, 12.0);
  EXPECT_DOUBLE_EQ(c->y, 12.0);
}

TEST(Centroid, EmptyMaskHasNone) {
  const Frame f(8, 8);
  const auto m = act::apply_mask(f, {100, 140, 0.5, 1, 0.5, 1}, {0, 0, 8, 8});
  EXPECT_EQ(m.active_count(), 0u);
  EXPECT_FALSE(act::centroid(m));
}

TEST(Frame, RejectsBadDimensionsAndBuffers) {
  EXPECT_THROW(Frame(0, 4), act::Error);
  EXPECT_THROW(Frame(2, 2, std::vector<std::uint8_t>(11), 0.0), act::Error);
  EXPECT_NO_THROW(Frame(2, 2, std::vector<std::uint8_t>(12), 0.0));
}

}  // namespace
