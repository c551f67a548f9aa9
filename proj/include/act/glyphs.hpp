// SPDX-License-Identifier: Apache-2.0
//
// Fixed 5x7 bitmap font used by the simulated robot display and matched by
// the template recognizer. The atlas can be exported as a PPM strip plus a
// JSON index so external tools see exactly the glyphs the matcher expects.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "act/frame.hpp"

namespace act {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;

using GlyphBitmap = std::array<std::uint8_t, kGlyphWidth * kGlyphHeight>;

class GlyphAtlas {
 public:
  /// Digits, '.', '-', and the letters needed for the display labels.
  static const GlyphAtlas& builtin();

  explicit GlyphAtlas(std::map<char, GlyphBitmap> glyphs) : glyphs_(std::move(glyphs)) {}

  bool contains(char c) const { return glyphs_.count(c) != 0; }
  const GlyphBitmap& glyph(char c) const;
  const std::map<char, GlyphBitmap>& glyphs() const noexcept { return glyphs_; }

  /// Strip image (one cell per glyph, in map order, white on black) and
  /// its manifest {"cell_width","cell_height","glyphs":[{"char","x"}]}.
  Frame strip() const;
  std::string manifest_json() const;
  void save(const std::filesystem::path& ppm, const std::filesystem::path& manifest) const;
  static GlyphAtlas load(const std::filesystem::path& ppm, const std::filesystem::path& manifest);

  friend bool operator==(const GlyphAtlas&, const GlyphAtlas&) = default;

 private:
  std::map<char, GlyphBitmap> glyphs_;
};

/// Draws `text` with its top-left cell at (x, y). Each glyph pixel becomes a
/// scale x scale block; cells advance by (kGlyphWidth + 1) * scale. Pixels
/// outside the frame are clipped; characters absent from the atlas (e.g.
/// ' ') leave their cell untouched.
void draw_text(Frame& frame, const GlyphAtlas& atlas, int x, int y, std::string_view text, int scale, Rgb color);

}  // namespace act
