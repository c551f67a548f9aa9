// SPDX-License-Identifier: Apache-2.0
//
// Bump-sensor stimulus plan, response classification and the fault
// diagnosis matrix (sensor responses x display status).

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace act {

enum class BumpStimulus { TapLeft, TapRight, TapBoth };
enum class BumpResponse { ReportsLeft, ReportsRight, ReportsBoth, NoResponse, Partial };
enum class DisplayStatus { Normal, PartialOrMissing, IncorrectOrMissing, NoOutput };
enum class Diagnosis {
  LeftSensorHwFault,
  RightSensorHwFault,
  DisplayHwFault,
  BothSensorsFaulty,
  LeftMappingError,
  RightMappingError,
  NoResponseAnyBump,
  SensorsOperatingCorrectly,
  Undetermined,
};

std::string_view to_string(BumpStimulus s) noexcept;
std::string_view to_string(BumpResponse r) noexcept;
std::string_view to_string(DisplayStatus d) noexcept;
std::string_view to_string(Diagnosis d) noexcept;

/// Case-insensitive; accepts the enum spelling ("ReportsLeft") or the
/// snake_case form ("reports_left"). Throws ParseError.
BumpResponse parse_bump_response(std::string_view s);
DisplayStatus parse_display_status(std::string_view s);
Diagnosis parse_diagnosis(std::string_view s);

struct BumpTiming {
  double press_s = 0.2;
  double settle_s = 1.0;
};

/// Always [TapLeft, TapRight, TapBoth].
std::array<BumpStimulus, 3> stimulus_plan();

struct BumpEvent {
  std::string label;  // "left" / "right"; anything else is garbled output
  double t = 0.0;     // seconds since the stimulus started
};

/// Maps the set of sides reported inside [0, window] to a response.
/// Unrecognised labels make the response Partial.
BumpResponse classify_response(const std::vector<BumpEvent>& events, BumpStimulus stimulus, double window);

struct DiagnosisResult {
  Diagnosis diagnosis = Diagnosis::Undetermined;
  std::string row;  // matched matrix row, or the raw tuple when Undetermined
};

DiagnosisResult diagnose(BumpResponse left, BumpResponse right, BumpResponse both, DisplayStatus display);

/// Text replay record:
///   left:<events>
///   right:<events>
///   both:<events>
///   display:<status>
/// where <events> is a comma-separated list of side labels (possibly empty).
struct BumpRecord {
  std::vector<std::string> left;
  std::vector<std::string> right;
  std::vector<std::string> both;
  DisplayStatus display = DisplayStatus::Normal;
};

BumpRecord parse_bump_record(std::string_view text);
std::string format_bump_record(const BumpRecord& record);
DiagnosisResult diagnose_record(const BumpRecord& record);

}  // namespace act
