// SPDX-License-Identifier: Apache-2.0
//
// Test plan documents (JSON).
//
//   {
//     "plan_id": "robot-smoke",
//     "seed": 7,
//     "trigger": {"labels": ["hw-test"], "on_merge_request": true},
//     "build_hook": "make firmware", "flash_hook": "./flash.sh", "workdir": ".",
//     "device": {"type": "sim", "config": {...}, "fault": "bump_swapped:left"},
//     "cases": [
//       {"id": "led", "kind": "blink", "expected_period_s": 1.0},
//       {"id": "tilt", "kind": "imu", "pitch_deg": 25, "roll_deg": 0},
//       {"id": "bump", "kind": "bump"},
//       {"id": "motor", "kind": "rpm", "duty_cycle": 0.05}
//     ]
//   }
//
// External devices replace "config"/"fault" with capture paths:
//   {"type": "external", "frames_dir": "...", "snapshot": "x.ppm", "bump_record": "b.txt"}

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "act/blink.hpp"
#include "act/bump.hpp"
#include "act/display.hpp"
#include "act/motion.hpp"
#include "act/sim.hpp"

namespace act {

struct Trigger {
  std::vector<std::string> labels;
  bool on_merge_request = false;
};

struct TriggerEvent {
  std::vector<std::string> labels;
  bool is_merge_request = false;
};

struct BlinkCase {
  double expected_period_s = 1.0;
  BlinkPolicy policy;
  std::optional<Roi> roi;
  std::optional<HsvRange> range;
};

struct ImuCase {
  double pitch_deg = 0.0;
  double roll_deg = 0.0;
  double settle_s = 2.0;
  ImuPolicy policy;
};

struct BumpCase {
  BumpTiming timing;
};

struct RpmCase {
  std::optional<double> duty_cycle;
  std::optional<double> expected_rpm;
  MotorCalibrationTable calibration;
  StabilityPolicy policy;

  /// expected_rpm if given, else the calibration lookup of duty_cycle.
  double target_rpm() const;
};

struct TestCase {
  std::string id;
  std::variant<BlinkCase, ImuCase, BumpCase, RpmCase> params;
  int retries = 2;
  double window_extension_factor = 1.5;

  std::string kind() const;
  void validate() const;
};

struct SimDeviceSpec {
  SimConfig config;
  FaultSpec fault;
};

struct ExternalDeviceSpec {
  std::filesystem::path frames_dir;
  std::filesystem::path snapshot;
  std::filesystem::path bump_record;
};

struct TestPlan {
  std::string plan_id;
  std::uint64_t seed = 0;
  Trigger trigger;
  std::optional<std::string> build_hook;
  std::optional<std::string> flash_hook;
  std::optional<std::filesystem::path> workdir;
  std::variant<SimDeviceSpec, ExternalDeviceSpec> device = SimDeviceSpec{};
  std::vector<TestCase> cases;

  void validate() const;
};

/// Throws ParseError / InvalidConfig.
TestPlan parse_plan(const nlohmann::json& doc);
TestPlan load_plan(const std::filesystem::path& path);
nlohmann::json plan_to_json(const TestPlan& plan);

/// True when the plan has no trigger configured, when the event is a merge
/// request and the plan runs on merge requests, or when the label sets
/// intersect.
bool should_trigger(const TestPlan& plan, const TriggerEvent& event);

}  // namespace act
