// SPDX-License-Identifier: Apache-2.0
//
// Deterministic stand-in for the physical rig. One composite scene holds
// the status LED, the wheel with its two markers, and the text display.
// Frames are a pure function of (config, fault, displayed IMU values, t);
// the seed only feeds the optional jitter sources.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "act/bump.hpp"
#include "act/display.hpp"
#include "act/frame.hpp"
#include "act/motion.hpp"

namespace act {

struct LedConfig {
  Roi roi{20, 20, 13, 13};
  double hue = 0.0;  // degrees
  double period = 1.0;
  double duty = 0.5;
  double phase = 0.0;  // seconds added to t before the on/off test
  int radius = 4;
};

struct WheelConfig {
  Point2 center{200.0, 70.0};
  double radius = 50.0;
  double rpm = 0.0;
  double start_angle = 0.0;  // radians, screen convention
  double center_hue = 240.0;
  double marker_hue = 0.0;
  double marker_radius = 4.0;
  /// Bound on the per-interval RPM ripple caused by angular jitter.
  double ripple_rpm = 1.0;
};

struct ImuSimConfig {
  double noise_deg = 1.1;
  bool allow_compound_tilt = false;
};

struct SimConfig {
  double fps = 30.0;
  int width = 320;
  int height = 240;
  LedConfig led;
  WheelConfig wheel;
  DisplayLayout display = default_display_layout();
  ImuSimConfig imu;
  std::uint64_t seed = 0;
  double pixel_noise = 0.0;  // max per-channel jitter, 0 = off

  /// Throws InvalidConfig.
  void validate() const;

  /// Default mask / marker configuration matched to this scene.
  HsvRange led_range() const;
  MarkerConfig marker_config() const;
};

enum class FaultSide { Left, Right, Both };
std::string_view to_string(FaultSide s) noexcept;

struct FaultSpec {
  enum class Kind {
    None,
    LedWrongPeriod,
    LedStuck,
    ImuCalibrationError,
    DisplayNoOutput,
    DisplayPartial,
    BumpDeadSensor,
    BumpSwappedMapping,
    MotorSpeedError,
  };

  Kind kind = Kind::None;
  double factor = 1.0;    // LedWrongPeriod, MotorSpeedError
  bool stuck_on = false;  // LedStuck
  double scale = 1.0;     // ImuCalibrationError
  double offset = 0.0;    // ImuCalibrationError
  double fraction = 0.5;  // DisplayPartial
  FaultSide side = FaultSide::Left;

  static FaultSpec none() { return {}; }
  static FaultSpec led_wrong_period(double f) { FaultSpec s; s.kind = Kind::LedWrongPeriod; s.factor = f; return s; }
  static FaultSpec led_stuck(bool on) { FaultSpec s; s.kind = Kind::LedStuck; s.stuck_on = on; return s; }
  static FaultSpec imu_calibration(double scale, double offset) {
    FaultSpec s; s.kind = Kind::ImuCalibrationError; s.scale = scale; s.offset = offset; return s;
  }
  static FaultSpec display_no_output() { FaultSpec s; s.kind = Kind::DisplayNoOutput; return s; }
  static FaultSpec display_partial(double f) { FaultSpec s; s.kind = Kind::DisplayPartial; s.fraction = f; return s; }
  static FaultSpec bump_dead(FaultSide side) { FaultSpec s; s.kind = Kind::BumpDeadSensor; s.side = side; return s; }
  static FaultSpec bump_swapped(FaultSide side) { FaultSpec s; s.kind = Kind::BumpSwappedMapping; s.side = side; return s; }
  static FaultSpec motor_speed(double f) { FaultSpec s; s.kind = Kind::MotorSpeedError; s.factor = f; return s; }

  void validate() const;

  /// Compact text form used on the command line, e.g. "none",
  /// "led_wrong_period:2", "led_stuck:off", "imu_calibration:10.7425,2.96",
  /// "display_partial:0.5", "bump_dead:left", "bump_swapped:both",
  /// "motor_speed:1.2". Throws ParseError.
  static FaultSpec parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const FaultSpec& a, const FaultSpec& b) { return a.to_string() == b.to_string(); }
};

void to_json(nlohmann::json& j, const FaultSpec& f);
void from_json(const nlohmann::json& j, FaultSpec& f);
void to_json(nlohmann::json& j, const SimConfig& c);
/// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, SimConfig& c);

struct DisplayedImu {
  double pitch = 0.0;
  double roll = 0.0;
};

/// Wheel marker angle at time t, including jitter (not wrapped).
double wheel_angle(const SimConfig& cfg, const FaultSpec& fault, double t);
bool led_on(const SimConfig& cfg, const FaultSpec& fault, double t);

/// Throws InvalidConfig / InvalidArgument (t < 0).
Frame render_frame(const SimConfig& cfg, const FaultSpec& fault, double t, const DisplayedImu& imu = {});

struct BumpObservation {
  std::vector<BumpEvent> events;
  DisplayStatus display = DisplayStatus::Normal;
};

BumpObservation bump_response(const SimConfig& cfg, const FaultSpec& fault, BumpStimulus stimulus,
                              const BumpTiming& timing = {});

/// Single-owner simulated device: holds the commanded tilt (and the noisy
/// value it displays) and the commanded motor speed.
class RobotSim {
 public:
  RobotSim(SimConfig cfg, FaultSpec fault);

  const SimConfig& config() const noexcept { return cfg_; }
  const FaultSpec& fault() const noexcept { return fault_; }
  const DisplayedImu& displayed_imu() const noexcept { return displayed_; }

  /// Throws InvalidActualAngle.
  void set_tilt(double pitch, double roll);
  void set_motor_rpm(double rpm);
  void set_motor_duty(double duty, const MotorCalibrationTable& table);

  /// Frame k at t = k / fps.
  Frame frame(std::size_t k) const;
  Frame frame_at(double t) const;

 private:
  SimConfig cfg_;
  FaultSpec fault_;
  DisplayedImu displayed_;
  std::mt19937_64 rng_;
};

/// splitmix64 finaliser; used to derive per-frame jitter from (seed, key).
std::uint64_t mix64(std::uint64_t x) noexcept;
/// Uniform in [-1, 1) from (seed, stream, index).
double hashed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

}  // namespace act
