// SPDX-License-Identifier: Apache-2.0
//
// Hue-mask kernels. apply_mask / count_active split ROI rows across OpenMP
// threads; apply_mask_serial is the plain reference loop they are tested
// against.

#include <string>

#include "act/error.hpp"
#include "act/frame.hpp"

namespace act {
namespace {

void check_roi(const Frame& frame, const Roi& roi) {
  if (!roi.fits(frame)) {
    throw Error(ErrorCode::RoiOutOfBounds,
                "roi (" + std::to_string(roi.x) + "," + std::to_string(roi.y) + "," + std::to_string(roi.w) + "," +
                    std::to_string(roi.h) + ") exceeds frame " + std::to_string(frame.width()) + "x" +
                    std::to_string(frame.height()));
  }
}

inline bool pixel_passes(const std::uint8_t* p, const HsvRange& range) noexcept {
  return in_range(rgb_to_hsv(p[0], p[1], p[2]), range);
}

}  // namespace

Mask apply_mask_serial(const Frame& frame, const HsvRange& range, const Roi& roi) {
  check_roi(frame, roi);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(roi.w) * static_cast<std::size_t>(roi.h));
  const auto px = frame.pixels();
  const auto stride = static_cast<std::size_t>(frame.width()) * 3;
  for (int y = 0; y < roi.h; ++y) {
    const std::uint8_t* row = px.data() + static_cast<std::size_t>(roi.y + y) * stride + static_cast<std::size_t>(roi.x) * 3;
    for (int x = 0; x < roi.w; ++x) {
      bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(roi.w) + static_cast<std::size_t>(x)] =
          pixel_passes(row + static_cast<std::size_t>(x) * 3, range) ? 1 : 0;
    }
  }
  return Mask(roi.w, roi.h, std::move(bits));
}

Mask apply_mask(const Frame& frame, const HsvRange& range, const Roi& roi) {
  check_roi(frame, roi);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(roi.w) * static_cast<std::size_t>(roi.h));
  const std::uint8_t* px = frame.pixels().data();
  const auto stride = static_cast<std::size_t>(frame.width()) * 3;
  std::uint8_t* out = bits.data();
  const int w = roi.w;
  const int h = roi.h;

#pragma omp parallel for schedule(static) if (static_cast<long>(w) * h > 4096)
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = px + static_cast<std::size_t>(roi.y + y) * stride + static_cast<std::size_t>(roi.x) * 3;
    std::uint8_t* dst = out + static_cast<std::size_t>(y) * static_cast<std::size_t>(w);
    for (int x = 0; x < w; ++x) dst[x] = pixel_passes(row + static_cast<std::size_t>(x) * 3, range) ? 1 : 0;
  }
  return Mask(roi.w, roi.h, std::move(bits));
}

std::size_t count_active(const Frame& frame, const HsvRange& range, const Roi& roi) {
  check_roi(frame, roi);
  const std::uint8_t* px = frame.pixels().data();
  const auto stride = static_cast<std::size_t>(frame.width()) * 3;
  long total = 0;

#pragma omp parallel for schedule(static) reduction(+ : total) if (static_cast<long>(roi.w) * roi.h > 4096)
  for (int y = 0; y < roi.h; ++y) {
    const std::uint8_t* row = px + static_cast<std::size_t>(roi.y + y) * stride + static_cast<std::size_t>(roi.x) * 3;
    for (int x = 0; x < roi.w; ++x) total += pixel_passes(row + static_cast<std::size_t>(x) * 3, range) ? 1 : 0;
  }
  return static_cast<std::size_t>(total);
}

}  // namespace act
