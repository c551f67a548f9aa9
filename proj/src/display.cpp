// SPDX-License-Identifier: Apache-2.0

#include "act/display.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string_view>

#include "act/error.hpp"

namespace act {

void DisplayLayout::validate(int frame_width, int frame_height) const {
  if (scale < 1) throw Error(ErrorCode::InvalidConfig, "display: scale must be >= 1");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Roi& a = lines[i].value_box;
    if (!a.fits(frame_width, frame_height)) throw Error(ErrorCode::RoiOutOfBounds, "display: value box for '" + lines[i].label + "'");
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const Roi& b = lines[j].value_box;
      const bool overlap = a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
      if (overlap) throw Error(ErrorCode::InvalidConfig, "display: value boxes overlap");
    }
  }
}

DisplayLayout default_display_layout() {
  DisplayLayout l;
  l.scale = 2;
  const int cells = 8;
  l.lines.push_back({"Pitch", 12, 160, Roi{96, 160, cells * l.advance(), l.cell_height()}});
  l.lines.push_back({"Roll", 12, 192, Roi{96, 192, cells * l.advance(), l.cell_height()}});
  return l;
}

TemplateRecognizer::TemplateRecognizer(const GlyphAtlas& atlas) {
  for (char c : std::string_view("0123456789.-")) {
    if (atlas.contains(c)) templates_.emplace_back(c, atlas.glyph(c));
  }
  if (templates_.empty()) throw Error(ErrorCode::InvalidConfig, "recognizer: atlas has no numeric glyphs");
}

std::vector<RecognizedToken> TemplateRecognizer::recognize(const Frame& frame, const DisplayLayout& layout) const {
  layout.validate(frame);
  const int s = layout.scale;
  const int block = s * s;
  std::vector<RecognizedToken> out;

  for (const auto& line : layout.lines) {
    const Roi& box = line.value_box;
    const int cells = (box.w + s) / layout.advance();
    std::string text;
    double score_sum = 0.0;
    int scored = 0;

    for (int k = 0; k < cells; ++k) {
      const int x0 = box.x + k * layout.advance();
      if (x0 + layout.cell_width() > box.x + box.w) break;

      // Majority vote per glyph dot.
      GlyphBitmap cell{};
      int lit = 0;
      for (int gy = 0; gy < kGlyphHeight; ++gy) {
        for (int gx = 0; gx < kGlyphWidth; ++gx) {
          int on = 0;
          for (int dy = 0; dy < s; ++dy) {
            for (int dx = 0; dx < s; ++dx) {
              if (rgb_to_hsv(frame.at(x0 + gx * s + dx, box.y + gy * s + dy)).val >= 0.5) ++on;
            }
          }
          const bool dot = 2 * on > block;
          cell[gy * kGlyphWidth + gx] = dot ? 1 : 0;
          lit += dot ? 1 : 0;
        }
      }
      if (lit == 0) continue;

      char best = '?';
      double best_iou = -1.0;
      for (const auto& [c, tmpl] : templates_) {
        int inter = 0, uni = 0;
        for (std::size_t i = 0; i < cell.size(); ++i) {
          inter += (cell[i] & tmpl[i]);
          uni += (cell[i] | tmpl[i]);
        }
        const double iou = uni ? static_cast<double>(inter) / uni : 0.0;
        if (iou > best_iou) {
          best_iou = iou;
          best = c;
        }
      }
      text.push_back(best);
      score_sum += best_iou;
      ++scored;
    }

    if (scored > 0) out.push_back({line.label, text, score_sum / scored, box});
  }
  return out;
}

std::string_view to_string(DisplayFault f) noexcept {
  switch (f) {
    case DisplayFault::None: return "none";
    case DisplayFault::NoOutput: return "no_output";
    case DisplayFault::PartialOutput: return "partial_output";
  }
  return "none";
}

void ImuPolicy::validate() const {
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "imu: tolerance must be > 0");
  if (!(min_confidence >= 0.0 && min_confidence <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "imu: min_confidence must be in [0,1]");
  }
  if (!(valid_lo < valid_hi)) throw Error(ErrorCode::InvalidArgument, "imu: empty valid range");
}

double parse_signed_decimal(const std::string& text) {
  std::string_view sv = text;
  std::size_t i = 0;
  if (i < sv.size() && sv[i] == '-') ++i;
  const std::size_t int_start = i;
  while (i < sv.size() && std::isdigit(static_cast<unsigned char>(sv[i]))) ++i;
  bool ok = i > int_start;
  if (ok && i < sv.size() && sv[i] == '.') {
    const std::size_t frac_start = ++i;
    while (i < sv.size() && std::isdigit(static_cast<unsigned char>(sv[i]))) ++i;
    ok = i > frac_start;
  }
  if (!ok || i != sv.size()) throw Error(ErrorCode::MalformedNumeral, "not a signed decimal: '" + text + "'");
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (ec != std::errc() || ptr != sv.data() + sv.size()) {
    throw Error(ErrorCode::MalformedNumeral, "not a signed decimal: '" + text + "'");
  }
  return v;
}

ImuReading parse_reading(const std::vector<RecognizedToken>& tokens, const ImuPolicy& policy) {
  ImuReading r;
  r.tokens = tokens;
  if (tokens.empty()) {
    r.fault = DisplayFault::NoOutput;
    r.notes.push_back("no display output recognised");
    return r;
  }

  std::size_t unlabeled = 0;
  for (const auto& tok : tokens) {
    std::optional<double>* axis = nullptr;
    if (tok.label == "Pitch") {
      axis = &r.pitch;
    } else if (tok.label == "Roll") {
      axis = &r.roll;
    } else if (tok.label.empty()) {
      axis = unlabeled++ == 0 ? &r.pitch : &r.roll;
    } else {
      continue;
    }
    if (tok.confidence < policy.min_confidence) {
      r.notes.push_back((tok.label.empty() ? std::string("token") : tok.label) + " '" + tok.text + "' confidence " +
                        format_fixed(tok.confidence, 3) + " below " + format_fixed(policy.min_confidence, 3));
      continue;
    }
    try {
      *axis = parse_signed_decimal(tok.text);
    } catch (const Error& e) {
      r.notes.push_back(e.what());
    }
  }

  if (!r.pitch && !r.roll && r.notes.empty()) r.fault = DisplayFault::NoOutput;
  else if (!r.pitch || !r.roll) r.fault = DisplayFault::PartialOutput;
  return r;
}

TestVerdict imu_verdict(const ImuReading& reading, double actual_pitch, double actual_roll, const ImuPolicy& policy) {
  auto in_valid = [&](double v) { return v >= policy.valid_lo && v <= policy.valid_hi; };
  if (!in_valid(actual_pitch) || !in_valid(actual_roll)) {
    throw Error(ErrorCode::InvalidActualAngle, "actual angles must lie in [" + format_fixed(policy.valid_lo, 1) + ", " +
                                                   format_fixed(policy.valid_hi, 1) + "]");
  }
  if (!policy.allow_compound_tilt && actual_pitch != 0.0 && actual_roll != 0.0) {
    throw Error(ErrorCode::InvalidActualAngle, "only one of pitch/roll may be nonzero per test");
  }

  TestVerdict v;
  v.kind = "imu";
  v.measured["actual_pitch_deg"] = actual_pitch;
  v.measured["actual_roll_deg"] = actual_roll;
  v.measured["fault"] = std::string(to_string(reading.fault));
  if (reading.pitch) v.measured["pitch_deg"] = *reading.pitch;
  if (reading.roll) v.measured["roll_deg"] = *reading.roll;
  if (!reading.tokens.empty()) {
    double minc = 1.0;
    for (const auto& t : reading.tokens) minc = std::min(minc, t.confidence);
    v.measured["min_confidence"] = minc;
  }
  for (const auto& n : reading.notes) v.reason_log.push_back(n);

  if (reading.fault != DisplayFault::None) {
    v.outcome = Outcome::Fail;
    v.reason_log.push_back("display fault: " + std::string(to_string(reading.fault)));
    return v;
  }

  const double dp = std::fabs(*reading.pitch - actual_pitch);
  const double dr = std::fabs(*reading.roll - actual_roll);
  v.measured["pitch_deviation_deg"] = dp;
  v.measured["roll_deviation_deg"] = dr;

  if (!in_valid(*reading.pitch) || !in_valid(*reading.roll)) {
    v.outcome = Outcome::Fail;
    v.reason_log.push_back("calibration fault: measured (" + format_fixed(*reading.pitch, 2) + ", " +
                           format_fixed(*reading.roll, 2) + ") outside valid range");
    return v;
  }

  const std::string summary = "pitch " + format_fixed(*reading.pitch, 2) + " vs " + format_fixed(actual_pitch, 2) +
                              ", roll " + format_fixed(*reading.roll, 2) + " vs " + format_fixed(actual_roll, 2) +
                              " (tolerance " + format_fixed(policy.tolerance, 2) + " deg)";
  if (dp <= policy.tolerance && dr <= policy.tolerance) {
    v.outcome = Outcome::Pass;
    v.reason_log.push_back(summary);
  } else {
    v.outcome = Outcome::Fail;
    v.reason_log.push_back("deviation: " + summary);
  }
  return v;
}

}  // namespace act
