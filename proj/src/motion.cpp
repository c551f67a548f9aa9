// SPDX-License-Identifier: Apache-2.0

#include "act/motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "act/error.hpp"

namespace act {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::optional<double> track_angle(const Frame& frame, const MarkerConfig& cfg) {
  const auto c = centroid(apply_mask(frame, cfg.center_range, cfg.center_roi));
  const auto e = centroid(apply_mask(frame, cfg.edge_range, cfg.edge_roi));
  if (!c || !e) return std::nullopt;
  const double dx = (cfg.edge_roi.x + e->x) - (cfg.center_roi.x + c->x);
  const double dy = (cfg.edge_roi.y + e->y) - (cfg.center_roi.y + c->y);
  double a = std::atan2(dy, dx);
  if (a <= -std::numbers::pi) a = std::numbers::pi;
  return a;
}

RpmTrace accumulate(RpmTrace trace, double angle, double t) {
  if (!trace.origin_t) {
    trace.origin_t = t;
    trace.last_raw_angle = angle;
    return trace;
  }
  const double prev_t = trace.last_t();
  if (!(t > prev_t)) {
    throw Error(ErrorCode::NonMonotonicTimestamp,
                "rpm: t=" + format_fixed(t) + " does not advance past " + format_fixed(prev_t));
  }
  const double step = std::remainder(angle - *trace.last_raw_angle, kTwoPi);
  if (std::fabs(step) >= std::numbers::pi) {
    throw Error(ErrorCode::AliasedSample, "rpm: angular step of pi at t=" + format_fixed(t) + " is direction-ambiguous");
  }

  const double prev_unwrapped = trace.samples.empty() ? 0.0 : trace.samples.back().unwrapped_angle;
  RpmSample s;
  s.t = t;
  s.unwrapped_angle = prev_unwrapped + step;
  s.instantaneous_rpm = (step / kTwoPi) / ((t - prev_t) / 60.0);

  const double minutes = (t - *trace.origin_t) / 60.0;
  trace.cumulative_rotations = s.unwrapped_angle / kTwoPi;
  trace.rpm_estimate = std::fabs(trace.cumulative_rotations) / minutes;
  s.cumulative_rpm = trace.rpm_estimate;
  s.counted_rpm = std::floor(std::fabs(trace.cumulative_rotations)) / minutes;

  trace.last_raw_angle = angle;
  trace.samples.push_back(s);
  return trace;
}

void StabilityPolicy::validate() const {
  if (!(window > 0 && cv_max > 0 && range_abs > 0 && range_rel > 0 && trend_max > 0 && adopt_window > 0)) {
    throw Error(ErrorCode::InvalidArgument, "stability policy thresholds must be positive");
  }
}

StabilityReport stability(const RpmTrace& trace, const StabilityPolicy& policy, double now) {
  const auto& s = trace.samples;
  const double lo = now - policy.window;
  auto first = std::lower_bound(s.begin(), s.end(), lo, [](const RpmSample& a, double v) { return a.t < v; });
  auto last = std::upper_bound(s.begin(), s.end(), now, [](double v, const RpmSample& a) { return v < a.t; });
  const auto n = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, last - first));
  if (n < 2) {
    throw Error(ErrorCode::InsufficientSamples,
                "rpm: " + std::to_string(n) + " samples in window ending at " + format_fixed(now, 3));
  }

  StabilityReport r;
  r.samples = n;
  double sum = 0, sum_t = 0, lo_v = std::numeric_limits<double>::infinity(), hi_v = -lo_v;
  for (auto it = first; it != last; ++it) {
    sum += it->counted_rpm;
    sum_t += it->t;
    lo_v = std::min(lo_v, it->counted_rpm);
    hi_v = std::max(hi_v, it->counted_rpm);
  }
  const double dn = static_cast<double>(n);
  r.mean = sum / dn;
  const double mean_t = sum_t / dn;
  double ss = 0, stt = 0, sty = 0;
  for (auto it = first; it != last; ++it) {
    const double dy = it->counted_rpm - r.mean;
    const double dt = it->t - mean_t;
    ss += dy * dy;
    stt += dt * dt;
    sty += dt * dy;
  }
  r.range_halfwidth = (hi_v - lo_v) / 2.0;
  r.trend_slope = stt > 0 ? sty / stt : 0.0;

  if (r.mean == 0.0) {
    r.cv = std::numeric_limits<double>::infinity();
    r.reason = "ZeroMean: no completed rotations in window";
    return r;
  }
  r.cv = std::sqrt(ss / dn) / std::fabs(r.mean);

  const double range_limit = std::max(policy.range_abs, policy.range_rel * std::fabs(r.mean));
  const bool full = trace.origin_t && (now - *trace.origin_t) >= policy.window;
  if (!full) {
    r.reason = "window not yet full";
  } else if (!(r.cv < policy.cv_max)) {
    r.reason = "cv " + format_fixed(r.cv, 4) + " >= " + format_fixed(policy.cv_max, 4);
  } else if (!(r.range_halfwidth <= range_limit)) {
    r.reason = "range half-width " + format_fixed(r.range_halfwidth, 3) + " > " + format_fixed(range_limit, 3) + " RPM";
  } else if (!(std::fabs(r.trend_slope) < policy.trend_max)) {
    r.reason = "trend " + format_fixed(r.trend_slope, 4) + " RPM/s exceeds " + format_fixed(policy.trend_max, 4);
  } else {
    r.stable = true;
  }
  return r;
}

void MotorCalibrationTable::validate() const {
  if (entries.empty()) throw Error(ErrorCode::InvalidArgument, "calibration table is empty");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].second >= max_noload_rpm) {
      throw Error(ErrorCode::InvalidArgument, "calibration rpm must stay below the no-load maximum");
    }
    if (i > 0 && !(entries[i].first > entries[i - 1].first && entries[i].second > entries[i - 1].second)) {
      throw Error(ErrorCode::InvalidArgument, "calibration entries must be strictly increasing");
    }
  }
}

double MotorCalibrationTable::expected_rpm(double duty) const {
  validate();
  constexpr double eps = 1e-12;
  if (duty < entries.front().first - eps || duty > entries.back().first + eps) {
    throw Error(ErrorCode::InvalidArgument, "duty cycle " + format_fixed(duty, 4) + " outside calibration table");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (std::fabs(duty - entries[i].first) <= eps) return entries[i].second;
    if (i + 1 < entries.size() && duty < entries[i + 1].first) {
      const auto [d0, r0] = entries[i];
      const auto [d1, r1] = entries[i + 1];
      return r0 + (r1 - r0) * (duty - d0) / (d1 - d0);
    }
  }
  return entries.back().second;
}

TestVerdict rpm_verdict(const RpmTrace& trace, double expected_rpm, const StabilityPolicy& policy,
                        const MotorCalibrationTable& table) {
  TestVerdict v;
  v.kind = "rpm";
  v.duration_s = trace.elapsed();
  const double band = std::max(policy.range_abs, policy.range_rel * expected_rpm);
  v.measured["expected_rpm"] = expected_rpm;
  v.measured["band_rpm"] = band;
  v.measured["elapsed_s"] = trace.elapsed();
  v.measured["rpm_estimate"] = trace.rpm_estimate;
  v.measured["rotations"] = trace.cumulative_rotations;

  if (trace.samples.empty() || trace.elapsed() + 1e-9 < policy.adopt_window) {
    v.outcome = Outcome::Inconclusive;
    v.reason_log.push_back("observed " + format_fixed(trace.elapsed(), 3) + " s, adopt window is " +
                           format_fixed(policy.adopt_window, 3) + " s");
    return v;
  }

  const double deviation = std::fabs(trace.rpm_estimate - expected_rpm);
  v.measured["deviation_rpm"] = deviation;
  const std::string summary = "estimate " + format_fixed(trace.rpm_estimate, 3) + " RPM vs expected " +
                              format_fixed(expected_rpm, 3) + " RPM (band " + format_fixed(band, 3) + ")";

  if (trace.rpm_estimate > table.max_noload_rpm) {
    v.outcome = Outcome::Fail;
    v.reason_log.push_back("over-speed: " + summary + " exceeds no-load maximum " +
                           format_fixed(table.max_noload_rpm, 1) + " RPM");
    return v;
  }

  if (expected_rpm > 0.0) {
    const auto st = stability(trace, policy, trace.last_t());
    v.measured["cv"] = std::isfinite(st.cv) ? nlohmann::json(st.cv) : nlohmann::json(nullptr);
    v.measured["range_halfwidth_rpm"] = st.range_halfwidth;
    v.measured["trend_rpm_per_s"] = st.trend_slope;
    v.measured["stable"] = st.stable;
    if (!st.stable) {
      v.outcome = Outcome::Fail;
      v.reason_log.push_back("unstable: " + st.reason);
      v.reason_log.push_back(summary);
      return v;
    }
  } else {
    v.reason_log.push_back("expected stationary wheel; stability check skipped");
  }

  if (deviation <= band) {
    v.outcome = Outcome::Pass;
    v.reason_log.push_back(summary);
  } else {
    v.outcome = Outcome::Fail;
    v.reason_log.push_back("out-of-band: " + summary);
  }
  return v;
}

PlotTable rpm_plot(const RpmTrace& trace, const StabilityPolicy& policy) {
  PlotTable p;
  p.columns = {{"t_s", false}, {"instant_rpm", false}, {"cumulative_rpm", false}, {"stable", true}};
  p.rows.reserve(trace.samples.size());
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& s = trace.samples[i];
    bool stable = false;
    try {
      stable = stability(trace, policy, s.t).stable;
    } catch (const Error&) {
      stable = false;
    }
    p.rows.push_back({s.t, s.instantaneous_rpm, s.cumulative_rpm, stable ? 1.0 : 0.0});
  }
  return p;
}

}  // namespace act
