// SPDX-License-Identifier: Apache-2.0
//
// Recorded inputs: frame directories with a manifest, and the pre-extracted
// CSV series accepted in place of frames.
//
//   <dir>/manifest.json      {"fps", "width", "height", "frame_count",
//                             "scenario", "seed", "fault", "sim_config", ...}
//   <dir>/frame_000000.ppm   one binary PPM per frame, t = k / fps
//
//   blink CSV:  t_s,active_pixels
//   wheel CSV:  t_s,angle_rad      (empty angle = marker not visible)

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "act/blink.hpp"
#include "act/frame.hpp"
#include "act/motion.hpp"

namespace act {

struct FrameManifest {
  double fps = 30.0;
  int width = 0;
  int height = 0;
  std::size_t frame_count = 0;
  std::string scenario;
  std::uint64_t seed = 0;
  std::string fault = "none";
  nlohmann::json sim_config = nlohmann::json::object();
  nlohmann::json extra = nlohmann::json::object();  // scenario-specific keys

  nlohmann::json to_json() const;
  static FrameManifest from_json(const nlohmann::json& j);
};

inline constexpr const char* kManifestName = "manifest.json";

/// Throws IoError / ParseError.
FrameManifest read_manifest(const std::filesystem::path& dir);
void write_manifest(const std::filesystem::path& dir, const FrameManifest& m);

/// Frame k of a recorded directory with its timestamp restored to k / fps.
/// Throws IoError when the file is missing.
Frame read_recorded_frame(const std::filesystem::path& dir, const FrameManifest& m, std::size_t k);

struct BlinkSample {
  double t = 0.0;
  std::size_t active_pixels = 0;
};

struct AngleSample {
  double t = 0.0;
  std::optional<double> angle;
};

/// Throws IoError / ParseError (wrong header, malformed row).
std::vector<BlinkSample> read_blink_csv(const std::filesystem::path& path);
std::vector<AngleSample> read_angle_csv(const std::filesystem::path& path);
std::string blink_csv(const std::vector<BlinkSample>& samples);
std::string angle_csv(const std::vector<AngleSample>& samples);

/// Extracts the series from a recorded frame directory.
std::vector<BlinkSample> blink_series(const std::filesystem::path& dir, const Roi& roi, const HsvRange& range);
std::vector<AngleSample> angle_series(const std::filesystem::path& dir, const MarkerConfig& cfg);

/// Folds a series into the estimator and produces a verdict; the deviation
/// trace is attached as the plot (elapsed_s, deviation).
TestVerdict analyze_blink(const std::vector<BlinkSample>& samples, double expected_period, const BlinkPolicy& policy);
BlinkEstimate fold_blink(const std::vector<BlinkSample>& samples, double expected_period, const BlinkPolicy& policy);
PlotTable blink_plot(const BlinkEstimate& state);

/// Samples with no visible marker are skipped.
RpmTrace fold_angles(const std::vector<AngleSample>& samples);
TestVerdict analyze_rpm(const std::vector<AngleSample>& samples, double expected_rpm, const StabilityPolicy& policy,
                        const MotorCalibrationTable& table = {});

}  // namespace act
