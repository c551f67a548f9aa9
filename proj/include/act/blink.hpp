// SPDX-License-Identifier: Apache-2.0
//
// LED blink-period estimation from a timestamped active-pixel stream.
//
// A frame is ON when its masked active-pixel count reaches the policy
// threshold. Periods are measured edge to edge over OFF->ON transitions,
// so the result does not depend on the LED duty cycle or on where in the
// cycle the stream started. The level of the very first frame is taken as
// the initial state; it never counts as an edge.

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "act/verdict.hpp"

namespace act {

struct BlinkPolicy {
  std::size_t active_pixel_threshold = 5;
  double tolerance_fraction = 0.005;
  std::size_t min_blinks = 20;
  double max_flake_probability = 0.01;
  double max_observation = 30.0;  // seconds

  void validate() const;
};

struct BlinkEstimate {
  std::size_t rising_edges = 0;
  std::optional<double> first_edge_t;
  std::optional<double> last_edge_t;
  std::optional<double> period_estimate;
  std::optional<double> frequency_estimate;
  double elapsed = 0.0;
  /// (elapsed seconds, |period - expected| / expected), only recorded when
  /// an expected period is configured.
  std::vector<std::pair<double, double>> deviation_trace;

  std::optional<double> expected_period;
  std::optional<double> start_t;
  std::optional<double> last_t;
  std::optional<bool> level_on;

  BlinkEstimate() = default;
  explicit BlinkEstimate(std::optional<double> expected) : expected_period(expected) {}
};

/// Throws NonMonotonicTimestamp when t does not advance.
BlinkEstimate ingest(BlinkEstimate state, std::size_t active_count, double t, const BlinkPolicy& policy);

/// PASS / FAIL / INCONCLUSIVE. Zero edges over at least two expected
/// periods is a FAIL (stuck LED); fewer than min_blinks edges otherwise is
/// INCONCLUSIVE so the harness can extend the window.
TestVerdict blink_verdict(const BlinkEstimate& state, double expected_period, const BlinkPolicy& policy);

}  // namespace act
