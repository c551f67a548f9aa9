// SPDX-License-Identifier: Apache-2.0
//
// Independent HSV reference: hue as an exact, gcd-reduced fraction of
// degrees, converted to double with one division at the end.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>

#include "act/frame.hpp"

namespace oracle {

struct Fraction {
  long long num;
  long long den;
};

inline Fraction reduce(Fraction f) {
  const long long g = std::gcd(std::llabs(f.num), std::llabs(f.den));
  return g == 0 ? f : Fraction{f.num / g, f.den / g};
}

inline act::Hsv hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const long long r = r8, g = g8, b = b8;
  const long long hi = r > g ? (r > b ? r : b) : (g > b ? g : b);
  const long long lo = r < g ? (r < b ? r : b) : (g < b ? g : b);
  const long long c = hi - lo;
  act::Hsv out;
  out.val = static_cast<double>(hi) / 255.0;
  if (c == 0) return out;
  out.sat = static_cast<double>(c) / static_cast<double>(hi);

  // Sector offset (in sixths of the circle) plus the fractional position.
  Fraction h6;
  if (hi == r) {
    h6 = {g - b, c};
    if (h6.num < 0) h6.num += 6 * c;
  } else if (hi == g) {
    h6 = {(b - r) + 2 * c, c};
  } else {
    h6 = {(r - g) + 4 * c, c};
  }
  const Fraction deg = reduce({h6.num * 60, h6.den});
  out.hue = static_cast<double>(deg.num) / static_cast<double>(deg.den);
  return out;
}

}  // namespace oracle
