// SPDX-License-Identifier: Apache-2.0

#include "act/blink.hpp"

#include <cmath>
#include <string>

#include "act/error.hpp"

namespace act {

void BlinkPolicy::validate() const {
  if (active_pixel_threshold < 1) throw Error(ErrorCode::InvalidArgument, "blink: active_pixel_threshold must be >= 1");
  if (!(tolerance_fraction > 0.0 && tolerance_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "blink: tolerance_fraction must be in (0,1)");
  }
  if (min_blinks < 2) throw Error(ErrorCode::InvalidArgument, "blink: min_blinks must be >= 2");
  if (!(max_observation > 0.0)) throw Error(ErrorCode::InvalidArgument, "blink: max_observation must be > 0");
}

BlinkEstimate ingest(BlinkEstimate state, std::size_t active_count, double t, const BlinkPolicy& policy) {
  if (state.last_t && !(t > *state.last_t)) {
    throw Error(ErrorCode::NonMonotonicTimestamp,
                "blink: t=" + format_fixed(t) + " does not advance past " + format_fixed(*state.last_t));
  }
  if (!state.start_t) state.start_t = t;
  state.last_t = t;
  state.elapsed = t - *state.start_t;

  const bool on = active_count >= policy.active_pixel_threshold;
  const bool rising = state.level_on.has_value() && !*state.level_on && on;
  state.level_on = on;

  if (rising) {
    ++state.rising_edges;
    if (!state.first_edge_t) state.first_edge_t = t;
    state.last_edge_t = t;
    if (state.rising_edges >= 2) {
      state.period_estimate = (*state.last_edge_t - *state.first_edge_t) / static_cast<double>(state.rising_edges - 1);
      state.frequency_estimate = 1.0 / *state.period_estimate;
    }
  }

  if (state.expected_period && state.period_estimate) {
    const double dev = std::fabs(*state.period_estimate - *state.expected_period) / *state.expected_period;
    state.deviation_trace.emplace_back(state.elapsed, dev);
  }
  return state;
}

TestVerdict blink_verdict(const BlinkEstimate& state, double expected_period, const BlinkPolicy& policy) {
  if (!(expected_period > 0.0)) throw Error(ErrorCode::InvalidArgument, "blink: expected_period must be > 0");

  TestVerdict v;
  v.kind = "blink";
  v.duration_s = state.elapsed;
  v.measured["blinks"] = state.rising_edges;
  v.measured["elapsed_s"] = state.elapsed;
  v.measured["expected_period_s"] = expected_period;
  if (state.period_estimate) {
    v.measured["period_s"] = *state.period_estimate;
    v.measured["frequency_hz"] = *state.frequency_estimate;
    v.measured["deviation"] = std::fabs(*state.period_estimate - expected_period) / expected_period;
  }

  if (state.rising_edges < policy.min_blinks) {
    if (state.rising_edges == 0 && state.elapsed >= 2.0 * expected_period) {
      v.outcome = Outcome::Fail;
      v.reason_log.push_back("no LED transitions observed in " + format_fixed(state.elapsed, 3) +
                             " s (expected period " + format_fixed(expected_period, 3) + " s)");
      return v;
    }
    v.outcome = Outcome::Inconclusive;
    v.reason_log.push_back("observed " + std::to_string(state.rising_edges) + " blinks, need " +
                           std::to_string(policy.min_blinks) + " (elapsed " + format_fixed(state.elapsed, 3) + " s)");
    return v;
  }

  const double dev = std::fabs(*state.period_estimate - expected_period) / expected_period;
  const std::string summary = "period " + format_fixed(*state.period_estimate) + " s vs expected " +
                              format_fixed(expected_period) + " s, deviation " + format_fixed(dev * 100.0, 3) +
                              "% over " + std::to_string(state.rising_edges) + " blinks";
  if (dev <= policy.tolerance_fraction) {
    v.outcome = Outcome::Pass;
    v.reason_log.push_back(summary);
  } else {
    v.outcome = Outcome::Fail;
    v.reason_log.push_back(summary + " exceeds tolerance " + format_fixed(policy.tolerance_fraction * 100.0, 3) + "%");
  }
  return v;
}

}  // namespace act
