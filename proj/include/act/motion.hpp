// SPDX-License-Identifier: Apache-2.0
//
// Wheel RPM from two tracked markers: a fixed centre dot and a marker on
// the rim. Angles use screen coordinates (x right, y down), so a marker
// directly above the centre reads -pi/2 and positive rotation is clockwise
// on screen.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "act/frame.hpp"
#include "act/verdict.hpp"

namespace act {

struct MarkerConfig {
  HsvRange center_range;
  HsvRange edge_range;
  Roi center_roi;
  Roi edge_roi;
};

/// Angle in (-pi, pi] of the rim marker around the centre marker, or
/// nullopt when either marker is not visible. Throws RoiOutOfBounds.
std::optional<double> track_angle(const Frame& frame, const MarkerConfig& cfg);

struct RpmSample {
  double t = 0.0;
  double unwrapped_angle = 0.0;  // radians since the first observation
  double instantaneous_rpm = 0.0;  // over the last sample interval
  double cumulative_rpm = 0.0;     // |rotations| / elapsed minutes
  double counted_rpm = 0.0;        // completed rotations / elapsed minutes
};

/// Running rotation record. The first accumulated angle fixes the origin;
/// samples start with the second observation.
struct RpmTrace {
  std::optional<double> origin_t;
  std::optional<double> last_raw_angle;
  std::vector<RpmSample> samples;
  double cumulative_rotations = 0.0;
  double rpm_estimate = 0.0;

  double last_t() const noexcept { return samples.empty() ? origin_t.value_or(0.0) : samples.back().t; }
  double elapsed() const noexcept { return origin_t ? last_t() - *origin_t : 0.0; }
};

/// Extends the trace by the shortest signed step from the previous angle.
/// Throws NonMonotonicTimestamp, or AliasedSample when the step is exactly
/// pi and the direction cannot be resolved.
RpmTrace accumulate(RpmTrace trace, double angle, double t);

struct StabilityPolicy {
  double window = 30.0;        // s
  double cv_max = 0.03;
  double range_abs = 2.0;      // RPM
  double range_rel = 0.03;
  double trend_max = 0.02;     // RPM per second
  double adopt_window = 60.0;  // s

  void validate() const;
};

struct StabilityReport {
  double mean = 0.0;
  double cv = 0.0;
  double range_halfwidth = 0.0;
  double trend_slope = 0.0;
  std::size_t samples = 0;
  bool stable = false;
  std::string reason;
};

/// Stability of the counted-rotation RPM series over [now - window, now].
/// Requires the trace to span a full window before it can report stable.
/// Throws InsufficientSamples when fewer than two samples fall inside.
StabilityReport stability(const RpmTrace& trace, const StabilityPolicy& policy, double now);

struct MotorCalibrationTable {
  std::vector<std::pair<double, double>> entries{{0.05, 33.0}, {0.08, 60.0}, {0.10, 80.0}};
  double max_noload_rpm = 720.0;
  double peak_efficiency_rpm = 510.0;

  void validate() const;
  /// Linear interpolation between entries; duty outside the table throws
  /// InvalidArgument.
  double expected_rpm(double duty) const;
};

TestVerdict rpm_verdict(const RpmTrace& trace, double expected_rpm, const StabilityPolicy& policy,
                        const MotorCalibrationTable& table = {});

/// t_s, instant_rpm, cumulative_rpm, stable; `stable` is evaluated at every
/// sample time.
PlotTable rpm_plot(const RpmTrace& trace, const StabilityPolicy& policy);

}  // namespace act
