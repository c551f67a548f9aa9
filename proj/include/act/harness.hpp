// SPDX-License-Identifier: Apache-2.0
//
// Plan execution: devices, the per-case oracle pipelines, the retry /
// window-extension policy, and build/flash hooks.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "act/plan.hpp"
#include "act/replay.hpp"
#include "act/sim.hpp"
#include "act/verdict.hpp"

namespace act {

/// The rig as seen by the oracles. One device runs one case at a time.
class Device {
 public:
  virtual ~Device() = default;

  virtual std::string describe() const = 0;
  virtual double fps() const = 0;
  virtual Roi led_roi() const = 0;
  virtual HsvRange led_range() const = 0;
  virtual MarkerConfig marker_config() const = 0;
  virtual DisplayLayout display_layout() const = 0;

  /// Frame k of the current stream (t = k / fps), or nullopt once a
  /// recorded stream is exhausted. Throws IoError / DeviceError.
  virtual std::optional<Frame> frame(std::size_t k) = 0;

  virtual void set_tilt(double pitch, double roll) = 0;
  /// Display capture taken settle_s after the tilt was applied.
  virtual Frame snapshot(double settle_s) = 0;
  virtual void set_motor(const RpmCase& c) = 0;
  virtual BumpObservation bump(BumpStimulus stimulus, const BumpTiming& timing) = 0;
};

class SimDevice final : public Device {
 public:
  SimDevice(SimConfig cfg, FaultSpec fault);

  std::string describe() const override;
  double fps() const override { return sim_.config().fps; }
  Roi led_roi() const override { return sim_.config().led.roi; }
  HsvRange led_range() const override { return sim_.config().led_range(); }
  MarkerConfig marker_config() const override { return sim_.config().marker_config(); }
  DisplayLayout display_layout() const override { return sim_.config().display; }

  std::optional<Frame> frame(std::size_t k) override { return sim_.frame(k); }
  void set_tilt(double pitch, double roll) override { sim_.set_tilt(pitch, roll); }
  Frame snapshot(double settle_s) override { return sim_.frame_at(settle_s); }
  void set_motor(const RpmCase& c) override;
  BumpObservation bump(BumpStimulus stimulus, const BumpTiming& timing) override;

  const RobotSim& sim() const noexcept { return sim_; }

 private:
  RobotSim sim_;
};

/// Recorded captures: a frame directory (blink / rpm), a display snapshot
/// (imu) and a bump text record. Scene geometry comes from the manifest's
/// sim_config when present, else from the simulator defaults.
class ReplayDevice final : public Device {
 public:
  explicit ReplayDevice(ExternalDeviceSpec spec);

  std::string describe() const override;
  double fps() const override;
  Roi led_roi() const override { return scene_.led.roi; }
  HsvRange led_range() const override { return scene_.led_range(); }
  MarkerConfig marker_config() const override { return scene_.marker_config(); }
  DisplayLayout display_layout() const override { return scene_.display; }

  std::optional<Frame> frame(std::size_t k) override;
  void set_tilt(double, double) override {}
  Frame snapshot(double settle_s) override;
  void set_motor(const RpmCase&) override {}
  BumpObservation bump(BumpStimulus stimulus, const BumpTiming& timing) override;

 private:
  const FrameManifest& manifest();

  ExternalDeviceSpec spec_;
  std::optional<FrameManifest> manifest_;
  SimConfig scene_;
};

/// Base observation window of a case before extension (seconds).
double base_window(const TestCase& c);
/// base * factor^(attempt - 1), attempt >= 1.
double attempt_window(double base, double factor, int attempt);

/// One attempt of the case's oracle pipeline with the given window.
TestVerdict run_attempt(const TestCase& c, Device& device, double window);

/// Runs the case, retrying INCONCLUSIVE results with an extended window up
/// to `retries` times. Device and I/O failures become ERROR verdicts.
TestVerdict run_case(const TestCase& c, Device& device);

struct HookResult {
  bool ok = true;
  std::vector<std::string> log;
};

/// Runs build_hook then flash_hook (if present) in the plan's workdir,
/// capturing combined output. Stops at the first non-zero exit.
HookResult run_hooks(const TestPlan& plan);

/// CLI value, else ACT_SEED, else the plan's seed.
std::uint64_t effective_seed(const TestPlan& plan, std::optional<std::uint64_t> cli_seed);

std::unique_ptr<Device> make_device(const TestPlan& plan, std::uint64_t seed);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  bool run_hooks = true;
};

/// Hooks, then every case in order on a single device. A hook failure turns
/// every case into ERROR carrying the hook log.
std::vector<TestVerdict> run_plan(const TestPlan& plan, const RunOptions& options = {});

}  // namespace act
