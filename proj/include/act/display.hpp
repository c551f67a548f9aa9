// SPDX-License-Identifier: Apache-2.0
//
// Pitch/roll extraction from a display snapshot and the IMU verdict.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "act/frame.hpp"
#include "act/glyphs.hpp"
#include "act/verdict.hpp"

namespace act {

struct DisplayLine {
  std::string label;  // "Pitch" / "Roll"
  int label_x = 0;
  int label_y = 0;
  Roi value_box;
};

struct DisplayLayout {
  std::vector<DisplayLine> lines;
  int scale = 2;  // pixels per glyph dot

  int cell_width() const noexcept { return kGlyphWidth * scale; }
  int cell_height() const noexcept { return kGlyphHeight * scale; }
  int advance() const noexcept { return (kGlyphWidth + 1) * scale; }

  /// Throws RoiOutOfBounds / InvalidConfig.
  void validate(int frame_width, int frame_height) const;
  void validate(const Frame& frame) const { validate(frame.width(), frame.height()); }
};

/// Two lines, "Pitch" over "Roll", in the lower part of a 320x240 frame.
DisplayLayout default_display_layout();

struct RecognizedToken {
  std::string label;
  std::string text;
  double confidence = 0.0;
  Roi box;
};

class Recognizer {
 public:
  virtual ~Recognizer() = default;
  virtual std::vector<RecognizedToken> recognize(const Frame& frame, const DisplayLayout& layout) const = 0;
};

/// Per-cell template matcher over a glyph atlas, restricted to the numeric
/// glyphs 0-9 '.' '-'. A cell's score is the intersection-over-union of its
/// lit dots with the best template; token confidence is the mean over
/// non-blank cells. Boxes with no lit cells produce no token.
class TemplateRecognizer final : public Recognizer {
 public:
  explicit TemplateRecognizer(const GlyphAtlas& atlas = GlyphAtlas::builtin());
  std::vector<RecognizedToken> recognize(const Frame& frame, const DisplayLayout& layout) const override;

 private:
  std::vector<std::pair<char, GlyphBitmap>> templates_;
};

inline std::vector<RecognizedToken> recognize(const Frame& frame, const DisplayLayout& layout) {
  return TemplateRecognizer().recognize(frame, layout);
}

enum class DisplayFault { None, NoOutput, PartialOutput };
std::string_view to_string(DisplayFault f) noexcept;

struct ImuPolicy {
  double min_confidence = 0.80;
  double tolerance = 4.5;  // degrees, 5% of the 90 degree half-range
  double valid_lo = -90.0;
  double valid_hi = 90.0;
  bool allow_compound_tilt = false;

  void validate() const;
};

struct ImuReading {
  std::optional<double> pitch;
  std::optional<double> roll;
  std::vector<RecognizedToken> tokens;
  DisplayFault fault = DisplayFault::None;
  std::vector<std::string> notes;
};

/// Parses a signed decimal ("-12.5", "0.20"). Throws MalformedNumeral.
double parse_signed_decimal(const std::string& text);

/// Tokens are matched to axes by label ("Pitch"/"Roll"); unlabeled tokens
/// are taken in order. Low-confidence or malformed tokens leave their axis
/// empty. No tokens at all is NoOutput; any missing axis otherwise is
/// PartialOutput.
ImuReading parse_reading(const std::vector<RecognizedToken>& tokens, const ImuPolicy& policy);

/// Throws InvalidActualAngle for out-of-range actuals or (unless the policy
/// allows it) two nonzero actuals.
TestVerdict imu_verdict(const ImuReading& reading, double actual_pitch, double actual_roll, const ImuPolicy& policy);

}  // namespace act
