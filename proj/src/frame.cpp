// SPDX-License-Identifier: Apache-2.0

#include "act/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "act/error.hpp"

namespace act {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RoiOutOfBounds: return "RoiOutOfBounds";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
    case ErrorCode::AliasedSample: return "AliasedSample";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InvalidActualAngle: return "InvalidActualAngle";
    case ErrorCode::MalformedNumeral: return "MalformedNumeral";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DeviceError: return "DeviceError";
    case ErrorCode::HookFailed: return "HookFailed";
  }
  return "Unknown";
}

Frame::Frame(int width, int height, double timestamp)
    : Frame(width, height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                      static_cast<std::size_t>(std::max(height, 0)) * 3),
            timestamp) {}

Frame::Frame(int width, int height, std::vector<std::uint8_t> pixels, double timestamp)
    : width_(width), height_(height), pixels_(std::move(pixels)), timestamp_(timestamp) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument, "frame dimensions must be >= 1");
  }
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
    throw Error(ErrorCode::InvalidArgument, "pixel buffer size does not match width*height*3");
  }
  set_timestamp(timestamp);
}

void Frame::set_timestamp(double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "frame timestamp must be >= 0");
  timestamp_ = t;
}

bool Roi::fits(int frame_width, int frame_height) const noexcept {
  return x >= 0 && y >= 0 && w >= 1 && h >= 1 && x + w <= frame_width && y + h <= frame_height;
}

void HsvRange::validate() const {
  auto bad = [](const char* what) { throw Error(ErrorCode::InvalidArgument, std::string("HsvRange: ") + what); };
  if (!(hue_lo >= 0.0 && hue_lo < 360.0) || !(hue_hi >= 0.0 && hue_hi < 360.0)) bad("hue bounds outside [0,360)");
  if (!(sat_lo >= 0.0 && sat_hi <= 1.0 && sat_lo <= sat_hi)) bad("saturation bounds");
  if (!(val_lo >= 0.0 && val_hi <= 1.0 && val_lo <= val_hi)) bad("value bounds");
}

bool HsvRange::hue_contains(double hue) const noexcept {
  if (hue_lo <= hue_hi) return hue >= hue_lo && hue <= hue_hi;
  return hue >= hue_lo || hue <= hue_hi;
}

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  const int ri = r, gi = g, bi = b;
  const int mx = std::max({ri, gi, bi});
  const int mn = std::min({ri, gi, bi});
  const int delta = mx - mn;

  Hsv out;
  out.val = static_cast<double>(mx) / 255.0;
  if (mx == 0 || delta == 0) return out;
  out.sat = static_cast<double>(delta) / static_cast<double>(mx);

  // Numerator kept integral so the single division is correctly rounded.
  int num = 0;
  if (mx == ri) {
    num = 60 * (gi - bi);
    if (num < 0) num += 360 * delta;
  } else if (mx == gi) {
    num = 60 * (bi - ri) + 120 * delta;
  } else {
    num = 60 * (ri - gi) + 240 * delta;
  }
  out.hue = static_cast<double>(num) / static_cast<double>(delta);
  return out;
}

Rgb hsv_to_rgb(const Hsv& hsv) noexcept {
  const double c = hsv.val * hsv.sat;
  const double hp = std::fmod(hsv.hue, 360.0) / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r1 = 0, g1 = 0, b1 = 0;
  switch (static_cast<int>(hp)) {
    case 0: r1 = c; g1 = x; break;
    case 1: r1 = x; g1 = c; break;
    case 2: g1 = c; b1 = x; break;
    case 3: g1 = x; b1 = c; break;
    case 4: r1 = x; b1 = c; break;
    default: r1 = c; b1 = x; break;
  }
  const double m = hsv.val - c;
  auto to8 = [m](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround((v + m) * 255.0), 0L, 255L));
  };
  return {to8(r1), to8(g1), to8(b1)};
}

bool in_range(const Hsv& hsv, const HsvRange& range) noexcept {
  return hsv.sat >= range.sat_lo && hsv.sat <= range.sat_hi && hsv.val >= range.val_lo &&
         hsv.val <= range.val_hi && range.hue_contains(hsv.hue);
}

Mask::Mask(int w, int h, std::vector<std::uint8_t> bits) : w_(w), h_(h), bits_(std::move(bits)) {
  if (w < 1 || h < 1 || bits_.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {
    throw Error(ErrorCode::InvalidArgument, "mask bits length must equal w*h");
  }
  active_ = static_cast<std::size_t>(std::count_if(bits_.begin(), bits_.end(), [](auto b) { return b != 0; }));
}

std::optional<Point2> centroid(const Mask& mask) noexcept {
  if (mask.active_count() == 0) return std::nullopt;
  double sx = 0.0, sy = 0.0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.test(x, y)) {
        sx += x;
        sy += y;
      }
    }
  }
  const auto n = static_cast<double>(mask.active_count());
  return Point2{sx / n, sy / n};
}

}  // namespace act
