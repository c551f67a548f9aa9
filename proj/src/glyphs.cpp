// SPDX-License-Identifier: Apache-2.0

#include "act/glyphs.hpp"

#include <json.hpp>

#include "act/error.hpp"
#include "act/ppm.hpp"

namespace act {
namespace {

GlyphBitmap from_rows(const std::array<const char*, kGlyphHeight>& rows) {
  GlyphBitmap g{};
  for (int y = 0; y < kGlyphHeight; ++y) {
    for (int x = 0; x < kGlyphWidth; ++x) g[y * kGlyphWidth + x] = rows[y][x] == '1' ? 1 : 0;
  }
  return g;
}

std::map<char, GlyphBitmap> builtin_glyphs() {
  std::map<char, GlyphBitmap> m;
  m['0'] = from_rows({"01110", "10001", "10011", "10101", "11001", "10001", "01110"});
  m['1'] = from_rows({"00100", "01100", "00100", "00100", "00100", "00100", "01110"});
  m['2'] = from_rows({"01110", "10001", "00001", "00010", "00100", "01000", "11111"});
  m['3'] = from_rows({"11111", "00010", "00100", "00010", "00001", "10001", "01110"});
  m['4'] = from_rows({"00010", "00110", "01010", "10010", "11111", "00010", "00010"});
  m['5'] = from_rows({"11111", "10000", "11110", "00001", "00001", "10001", "01110"});
  m['6'] = from_rows({"00110", "01000", "10000", "11110", "10001", "10001", "01110"});
  m['7'] = from_rows({"11111", "00001", "00010", "00100", "01000", "01000", "01000"});
  m['8'] = from_rows({"01110", "10001", "10001", "01110", "10001", "10001", "01110"});
  m['9'] = from_rows({"01110", "10001", "10001", "01111", "00001", "00010", "01100"});
  m['.'] = from_rows({"00000", "00000", "00000", "00000", "00000", "01100", "01100"});
  m['-'] = from_rows({"00000", "00000", "00000", "11111", "00000", "00000", "00000"});
  m['P'] = from_rows({"11110", "10001", "10001", "11110", "10000", "10000", "10000"});
  m['R'] = from_rows({"11110", "10001", "10001", "11110", "10100", "10010", "10001"});
  m['c'] = from_rows({"00000", "00000", "01110", "10000", "10000", "10001", "01110"});
  m['h'] = from_rows({"10000", "10000", "10110", "11001", "10001", "10001", "10001"});
  m['i'] = from_rows({"00100", "00000", "01100", "00100", "00100", "00100", "01110"});
  m['l'] = from_rows({"01100", "00100", "00100", "00100", "00100", "00100", "01110"});
  m['o'] = from_rows({"00000", "00000", "01110", "10001", "10001", "10001", "01110"});
  m['t'] = from_rows({"01000", "01000", "11100", "01000", "01000", "01001", "00110"});
  return m;
}

}  // namespace

const GlyphAtlas& GlyphAtlas::builtin() {
  static const GlyphAtlas atlas(builtin_glyphs());
  return atlas;
}

const GlyphBitmap& GlyphAtlas::glyph(char c) const {
  auto it = glyphs_.find(c);
  if (it == glyphs_.end()) throw Error(ErrorCode::InvalidArgument, std::string("glyph not in atlas: '") + c + "'");
  return it->second;
}

Frame GlyphAtlas::strip() const {
  Frame f(static_cast<int>(glyphs_.size()) * kGlyphWidth, kGlyphHeight);
  int cell = 0;
  for (const auto& [c, g] : glyphs_) {
    for (int y = 0; y < kGlyphHeight; ++y) {
      for (int x = 0; x < kGlyphWidth; ++x) {
        if (g[y * kGlyphWidth + x]) f.set(cell * kGlyphWidth + x, y, {255, 255, 255});
      }
    }
    ++cell;
  }
  return f;
}

std::string GlyphAtlas::manifest_json() const {
  nlohmann::ordered_json j;
  j["cell_width"] = kGlyphWidth;
  j["cell_height"] = kGlyphHeight;
  j["glyphs"] = nlohmann::ordered_json::array();
  int cell = 0;
  for (const auto& [c, g] : glyphs_) {
    j["glyphs"].push_back({{"char", std::string(1, c)}, {"x", cell * kGlyphWidth}});
    ++cell;
  }
  return j.dump(2) + "\n";
}

void GlyphAtlas::save(const std::filesystem::path& ppm, const std::filesystem::path& manifest) const {
  write_ppm(ppm, strip());
  write_file_bytes(manifest, manifest_json());
}

GlyphAtlas GlyphAtlas::load(const std::filesystem::path& ppm, const std::filesystem::path& manifest) {
  const Frame strip = read_ppm(ppm);
  const auto bytes = read_file_bytes(manifest);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("glyph manifest: ") + e.what());
  }
  if (j.value("cell_width", 0) != kGlyphWidth || j.value("cell_height", 0) != kGlyphHeight) {
    throw Error(ErrorCode::ParseError, "glyph manifest: unsupported cell geometry");
  }
  std::map<char, GlyphBitmap> glyphs;
  for (const auto& g : j.at("glyphs")) {
    const auto ch = g.at("char").get<std::string>();
    const int x0 = g.at("x").get<int>();
    if (ch.size() != 1 || x0 < 0 || x0 + kGlyphWidth > strip.width()) {
      throw Error(ErrorCode::ParseError, "glyph manifest: bad entry");
    }
    GlyphBitmap bm{};
    for (int y = 0; y < kGlyphHeight; ++y) {
      for (int x = 0; x < kGlyphWidth; ++x) bm[y * kGlyphWidth + x] = strip.at(x0 + x, y).r >= 128 ? 1 : 0;
    }
    glyphs[ch[0]] = bm;
  }
  return GlyphAtlas(std::move(glyphs));
}

void draw_text(Frame& frame, const GlyphAtlas& atlas, int x, int y, std::string_view text, int scale, Rgb color) {
  const int advance = (kGlyphWidth + 1) * scale;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!atlas.contains(text[i])) continue;
    const auto& g = atlas.glyph(text[i]);
    const int cx = x + static_cast<int>(i) * advance;
    for (int gy = 0; gy < kGlyphHeight; ++gy) {
      for (int gx = 0; gx < kGlyphWidth; ++gx) {
        if (!g[gy * kGlyphWidth + gx]) continue;
        for (int dy = 0; dy < scale; ++dy) {
          for (int dx = 0; dx < scale; ++dx) {
            const int px = cx + gx * scale + dx;
            const int py = y + gy * scale + dy;
            if (px >= 0 && py >= 0 && px < frame.width() && py < frame.height()) frame.set(px, py, color);
          }
        }
      }
    }
  }
}

}  // namespace act
