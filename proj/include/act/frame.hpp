// SPDX-License-Identifier: Apache-2.0
//
// Pixel primitives shared by every oracle: HSV conversion, ROI masking,
// active-pixel counting and blob centroids.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace act {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major 8-bit RGB image with a capture timestamp in seconds.
class Frame {
 public:
  Frame(int width, int height, double timestamp = 0.0);
  Frame(int width, int height, std::vector<std::uint8_t> pixels, double timestamp);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double timestamp() const noexcept { return timestamp_; }
  void set_timestamp(double t);

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  Rgb at(int x, int y) const noexcept {
    const auto* p = &pixels_[offset(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    auto* p = &pixels_[offset(x, y)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
  double timestamp_;
};

struct Roi {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  bool fits(int frame_width, int frame_height) const noexcept;
  bool fits(const Frame& frame) const noexcept { return fits(frame.width(), frame.height()); }
  friend bool operator==(const Roi&, const Roi&) = default;
};

/// Hue bounds in degrees; hue_lo > hue_hi selects the arc that wraps
/// through 0 degrees (the usual case for red).
struct HsvRange {
  double hue_lo = 0.0;
  double hue_hi = 359.999;
  double sat_lo = 0.0;
  double sat_hi = 1.0;
  double val_lo = 0.0;
  double val_hi = 1.0;

  /// Throws InvalidArgument when a bound is out of range or inverted.
  void validate() const;
  bool hue_contains(double hue) const noexcept;
  friend bool operator==(const HsvRange&, const HsvRange&) = default;
};

struct Hsv {
  double hue = 0.0;  // degrees [0, 360)
  double sat = 0.0;  // [0, 1]
  double val = 0.0;  // [0, 1]

  friend bool operator==(const Hsv&, const Hsv&) = default;
};

/// Hexcone conversion ("V = max"). Hue is 0 for achromatic input.
Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;
inline Hsv rgb_to_hsv(Rgb c) noexcept { return rgb_to_hsv(c.r, c.g, c.b); }

/// Inverse hexcone; channels rounded to nearest.
Rgb hsv_to_rgb(const Hsv& hsv) noexcept;

bool in_range(const Hsv& hsv, const HsvRange& range) noexcept;

class Mask {
 public:
  Mask(int w, int h, std::vector<std::uint8_t> bits);

  int width() const noexcept { return w_; }
  int height() const noexcept { return h_; }
  std::size_t active_count() const noexcept { return active_; }
  bool test(int x, int y) const noexcept {
    return bits_[static_cast<std::size_t>(y) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(x)] != 0;
  }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  int w_;
  int h_;
  std::vector<std::uint8_t> bits_;
  std::size_t active_;
};

/// OpenMP row-parallel mask over the ROI. Throws RoiOutOfBounds.
Mask apply_mask(const Frame& frame, const HsvRange& range, const Roi& roi);

/// Single-threaded reference with the same contract; kept for kernel
/// equivalence tests and the benchmark baseline.
Mask apply_mask_serial(const Frame& frame, const HsvRange& range, const Roi& roi);

/// Count-only variant of apply_mask (no bit buffer), used on the blink
/// hot path.
std::size_t count_active(const Frame& frame, const HsvRange& range, const Roi& roi);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Unweighted mean of active-pixel coordinates in mask-local space.
std::optional<Point2> centroid(const Mask& mask) noexcept;

}  // namespace act
