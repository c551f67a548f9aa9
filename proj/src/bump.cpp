// SPDX-License-Identifier: Apache-2.0

#include "act/bump.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "act/error.hpp"

namespace act {

std::string_view to_string(BumpStimulus s) noexcept {
  switch (s) {
    case BumpStimulus::TapLeft: return "TapLeft";
    case BumpStimulus::TapRight: return "TapRight";
    case BumpStimulus::TapBoth: return "TapBoth";
  }
  return "TapLeft";
}

std::string_view to_string(BumpResponse r) noexcept {
  switch (r) {
    case BumpResponse::ReportsLeft: return "ReportsLeft";
    case BumpResponse::ReportsRight: return "ReportsRight";
    case BumpResponse::ReportsBoth: return "ReportsBoth";
    case BumpResponse::NoResponse: return "NoResponse";
    case BumpResponse::Partial: return "Partial";
  }
  return "Partial";
}

std::string_view to_string(DisplayStatus d) noexcept {
  switch (d) {
    case DisplayStatus::Normal: return "Normal";
    case DisplayStatus::PartialOrMissing: return "PartialOrMissing";
    case DisplayStatus::IncorrectOrMissing: return "IncorrectOrMissing";
    case DisplayStatus::NoOutput: return "NoOutput";
  }
  return "Normal";
}

std::string_view to_string(Diagnosis d) noexcept {
  switch (d) {
    case Diagnosis::LeftSensorHwFault: return "LeftSensorHwFault";
    case Diagnosis::RightSensorHwFault: return "RightSensorHwFault";
    case Diagnosis::DisplayHwFault: return "DisplayHwFault";
    case Diagnosis::BothSensorsFaulty: return "BothSensorsFaulty";
    case Diagnosis::LeftMappingError: return "LeftMappingError";
    case Diagnosis::RightMappingError: return "RightMappingError";
    case Diagnosis::NoResponseAnyBump: return "NoResponseAnyBump";
    case Diagnosis::SensorsOperatingCorrectly: return "SensorsOperatingCorrectly";
    case Diagnosis::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

namespace {

// "ReportsLeft", "reports_left", "reports-left" all normalise to "reportsleft".
std::string normalise(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-' || std::isspace(static_cast<unsigned char>(c))) continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const E (&values)[N], const char* what) {
  const auto key = normalise(s);
  for (E v : values) {
    if (normalise(to_string(v)) == key) return v;
  }
  throw Error(ErrorCode::ParseError, std::string("unknown ") + what + ": '" + std::string(s) + "'");
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

BumpResponse parse_bump_response(std::string_view s) {
  static constexpr BumpResponse all[] = {BumpResponse::ReportsLeft, BumpResponse::ReportsRight,
                                         BumpResponse::ReportsBoth, BumpResponse::NoResponse, BumpResponse::Partial};
  return parse_enum(s, all, "bump response");
}

DisplayStatus parse_display_status(std::string_view s) {
  static constexpr DisplayStatus all[] = {DisplayStatus::Normal, DisplayStatus::PartialOrMissing,
                                          DisplayStatus::IncorrectOrMissing, DisplayStatus::NoOutput};
  return parse_enum(s, all, "display status");
}

Diagnosis parse_diagnosis(std::string_view s) {
  static constexpr Diagnosis all[] = {
      Diagnosis::LeftSensorHwFault, Diagnosis::RightSensorHwFault, Diagnosis::DisplayHwFault,
      Diagnosis::BothSensorsFaulty, Diagnosis::LeftMappingError,   Diagnosis::RightMappingError,
      Diagnosis::NoResponseAnyBump, Diagnosis::SensorsOperatingCorrectly, Diagnosis::Undetermined};
  return parse_enum(s, all, "diagnosis");
}

std::array<BumpStimulus, 3> stimulus_plan() {
  return {BumpStimulus::TapLeft, BumpStimulus::TapRight, BumpStimulus::TapBoth};
}

BumpResponse classify_response(const std::vector<BumpEvent>& events, BumpStimulus /*stimulus*/, double window) {
  bool left = false, right = false, garbled = false;
  for (const auto& e : events) {
    if (e.t < 0.0 || e.t > window) continue;
    const auto label = normalise(e.label);
    if (label == "left") left = true;
    else if (label == "right") right = true;
    else garbled = true;
  }
  if (garbled) return BumpResponse::Partial;
  if (left && right) return BumpResponse::ReportsBoth;
  if (left) return BumpResponse::ReportsLeft;
  if (right) return BumpResponse::ReportsRight;
  return BumpResponse::NoResponse;
}

DiagnosisResult diagnose(BumpResponse left, BumpResponse right, BumpResponse both, DisplayStatus display) {
  using R = BumpResponse;
  using D = DisplayStatus;
  auto silent = [](R r) { return r == R::NoResponse || r == R::Partial; };

  struct Row {
    R l, r, b;
    D d;
    Diagnosis dx;
    const char* name;
  };
  static constexpr Row rows[] = {
      {R::NoResponse, R::ReportsRight, R::ReportsRight, D::PartialOrMissing, Diagnosis::LeftSensorHwFault,
       "HW: left bump sensor fault"},
      {R::ReportsLeft, R::NoResponse, R::ReportsLeft, D::PartialOrMissing, Diagnosis::RightSensorHwFault,
       "HW: right bump sensor fault"},
      {R::ReportsLeft, R::ReportsRight, R::ReportsBoth, D::IncorrectOrMissing, Diagnosis::DisplayHwFault,
       "HW: display fault"},
      {R::ReportsRight, R::ReportsRight, R::ReportsRight, D::Normal, Diagnosis::LeftMappingError,
       "SW: left sensor mapped to right"},
      {R::ReportsLeft, R::ReportsLeft, R::ReportsLeft, D::Normal, Diagnosis::RightMappingError,
       "SW: right sensor mapped to left"},
      {R::NoResponse, R::NoResponse, R::NoResponse, D::Normal, Diagnosis::NoResponseAnyBump,
       "SW: both sensors incorrectly mapped"},
      {R::ReportsLeft, R::ReportsRight, R::ReportsBoth, D::Normal, Diagnosis::SensorsOperatingCorrectly,
       "Normal: no fault injected"},
  };
  for (const auto& row : rows) {
    if (row.l == left && row.r == right && row.b == both && row.d == display) return {row.dx, row.name};
  }
  // "Partial or no output" on every column with a dark display.
  if (display == D::NoOutput && silent(left) && silent(right) && silent(both)) {
    return {Diagnosis::BothSensorsFaulty, "HW: display or both bump sensors faulty"};
  }

  std::string raw = "(" + std::string(to_string(left)) + ", " + std::string(to_string(right)) + ", " +
                    std::string(to_string(both)) + ", " + std::string(to_string(display)) + ")";
  return {Diagnosis::Undetermined, raw};
}

BumpRecord parse_bump_record(std::string_view text) {
  BumpRecord rec;
  bool seen_left = false, seen_right = false, seen_both = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "bump record: missing ':' in '" + t + "'");
    const auto key = normalise(t.substr(0, colon));
    const auto value = trim(std::string_view(t).substr(colon + 1));

    std::vector<std::string> events;
    std::istringstream vs(value);
    std::string item;
    while (std::getline(vs, item, ',')) {
      auto it = trim(item);
      if (!it.empty()) events.push_back(it);
    }

    if (key == "left") {
      rec.left = events;
      seen_left = true;
    } else if (key == "right") {
      rec.right = events;
      seen_right = true;
    } else if (key == "both") {
      rec.both = events;
      seen_both = true;
    } else if (key == "display") {
      rec.display = parse_display_status(value);
    } else {
      throw Error(ErrorCode::ParseError, "bump record: unknown key '" + t.substr(0, colon) + "'");
    }
  }
  if (!seen_left || !seen_right || !seen_both) {
    throw Error(ErrorCode::ParseError, "bump record: left/right/both lines are required");
  }
  return rec;
}

std::string format_bump_record(const BumpRecord& record) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
  };
  return "left:" + join(record.left) + "\nright:" + join(record.right) + "\nboth:" + join(record.both) +
         "\ndisplay:" + std::string(to_string(record.display)) + "\n";
}

DiagnosisResult diagnose_record(const BumpRecord& record) {
  auto to_events = [](const std::vector<std::string>& labels) {
    std::vector<BumpEvent> ev;
    for (const auto& l : labels) ev.push_back({l, 0.0});
    return ev;
  };
  const double window = BumpTiming{}.settle_s;
  return diagnose(classify_response(to_events(record.left), BumpStimulus::TapLeft, window),
                  classify_response(to_events(record.right), BumpStimulus::TapRight, window),
                  classify_response(to_events(record.both), BumpStimulus::TapBoth, window), record.display);
}

}  // namespace act
