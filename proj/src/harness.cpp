// SPDX-License-Identifier: Apache-2.0

#include "act/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>

#include "act/error.hpp"
#include "act/ppm.hpp"

namespace act {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int severity(DisplayStatus d) {
  switch (d) {
    case DisplayStatus::Normal: return 0;
    case DisplayStatus::PartialOrMissing: return 1;
    case DisplayStatus::IncorrectOrMissing: return 2;
    case DisplayStatus::NoOutput: return 3;
  }
  return 0;
}

std::vector<BumpEvent> events_from_labels(const std::vector<std::string>& labels) {
  std::vector<BumpEvent> out;
  for (const auto& l : labels) out.push_back({l, 0.0});
  return out;
}

TestVerdict run_blink(const BlinkCase& b, Device& device, double window) {
  b.policy.validate();
  const Roi roi = b.roi.value_or(device.led_roi());
  const HsvRange range = b.range.value_or(device.led_range());
  const double fps = device.fps();
  BlinkEstimate st(b.expected_period_s);
  for (std::size_t k = 0;; ++k) {
    if (static_cast<double>(k) / fps > window + 1e-9) break;
    const auto f = device.frame(k);
    if (!f) break;
    st = ingest(std::move(st), count_active(*f, range, roi), f->timestamp(), b.policy);
    if (st.rising_edges >= b.policy.min_blinks) break;
  }
  auto v = blink_verdict(st, b.expected_period_s, b.policy);
  v.plot = blink_plot(st);
  return v;
}

TestVerdict run_imu(const ImuCase& m, Device& device, double window) {
  m.policy.validate();
  device.set_tilt(m.pitch_deg, m.roll_deg);
  const Frame snap = device.snapshot(window);
  const auto tokens = TemplateRecognizer().recognize(snap, device.display_layout());
  auto v = imu_verdict(parse_reading(tokens, m.policy), m.pitch_deg, m.roll_deg, m.policy);
  v.duration_s = window;
  return v;
}

TestVerdict run_bump(const BumpCase& b, Device& device, double window) {
  BumpTiming timing = b.timing;
  timing.settle_s = window;
  std::array<BumpResponse, 3> responses{};
  DisplayStatus display = DisplayStatus::Normal;
  const auto plan = stimulus_plan();
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto obs = device.bump(plan[i], timing);
    responses[i] = classify_response(obs.events, plan[i], window);
    if (severity(obs.display) > severity(display)) display = obs.display;
  }
  const auto d = diagnose(responses[0], responses[1], responses[2], display);

  TestVerdict v;
  v.kind = "bump";
  v.duration_s = window * static_cast<double>(plan.size());
  v.measured["left"] = std::string(to_string(responses[0]));
  v.measured["right"] = std::string(to_string(responses[1]));
  v.measured["both"] = std::string(to_string(responses[2]));
  v.measured["display"] = std::string(to_string(display));
  v.measured["diagnosis"] = std::string(to_string(d.diagnosis));
  v.measured["row"] = d.row;
  if (d.diagnosis == Diagnosis::SensorsOperatingCorrectly) {
    v.outcome = Outcome::Pass;
  } else if (d.diagnosis == Diagnosis::Undetermined) {
    v.outcome = Outcome::Inconclusive;
  } else {
    v.outcome = Outcome::Fail;
  }
  v.reason_log.push_back("diagnosis " + std::string(to_string(d.diagnosis)) + ": " + d.row);
  return v;
}

TestVerdict run_rpm(const RpmCase& r, Device& device, double window) {
  r.policy.validate();
  r.calibration.validate();
  const double expected = r.target_rpm();
  device.set_motor(r);
  const auto markers = device.marker_config();
  const double fps = device.fps();
  RpmTrace trace;
  for (std::size_t k = 0;; ++k) {
    if (static_cast<double>(k) / fps > window + 1e-9) break;
    const auto f = device.frame(k);
    if (!f) break;
    if (const auto a = track_angle(*f, markers)) trace = accumulate(std::move(trace), *a, f->timestamp());
  }
  auto v = rpm_verdict(trace, expected, r.policy, r.calibration);
  if (r.duty_cycle) v.measured["duty_cycle"] = *r.duty_cycle;
  v.plot = rpm_plot(trace, r.policy);
  return v;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

bool run_hook(const std::string& name, const std::string& cmd, const std::optional<std::filesystem::path>& workdir,
              std::vector<std::string>& log) {
  log.push_back(name + ": " + cmd);
  std::string full = "(" + cmd + ") 2>&1";
  if (workdir) full = "cd " + shell_quote(workdir->string()) + " && " + full;
  FILE* pipe = ::popen(full.c_str(), "r");
  if (!pipe) {
    log.push_back(name + ": failed to start");
    return false;
  }
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  std::size_t start = 0;
  while (start < out.size()) {
    auto end = out.find('\n', start);
    if (end == std::string::npos) end = out.size();
    log.push_back(name + "> " + out.substr(start, end - start));
    start = end + 1;
  }
  const int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  if (code != 0) {
    log.push_back(name + " exited with status " + std::to_string(code));
    return false;
  }
  return true;
}

TestVerdict error_verdict(const TestCase& c, const std::string& reason) {
  TestVerdict v;
  v.case_id = c.id;
  v.kind = c.kind();
  v.outcome = Outcome::Error;
  v.reason_log.push_back(reason);
  return v;
}

}  // namespace

SimDevice::SimDevice(SimConfig cfg, FaultSpec fault) : sim_(std::move(cfg), fault) {}

std::string SimDevice::describe() const {
  return "sim(fault=" + sim_.fault().to_string() + ", seed=" + std::to_string(sim_.config().seed) + ")";
}

void SimDevice::set_motor(const RpmCase& c) { sim_.set_motor_rpm(c.target_rpm()); }

BumpObservation SimDevice::bump(BumpStimulus stimulus, const BumpTiming& timing) {
  return bump_response(sim_.config(), sim_.fault(), stimulus, timing);
}

ReplayDevice::ReplayDevice(ExternalDeviceSpec spec) : spec_(std::move(spec)) {
  if (!spec_.frames_dir.empty()) {
    manifest_ = read_manifest(spec_.frames_dir);
    if (manifest_->sim_config.is_object() && !manifest_->sim_config.empty()) {
      from_json(manifest_->sim_config, scene_);
    }
    scene_.fps = manifest_->fps;
  }
}

std::string ReplayDevice::describe() const { return "external(" + spec_.frames_dir.string() + ")"; }

double ReplayDevice::fps() const { return manifest_ ? manifest_->fps : scene_.fps; }

const FrameManifest& ReplayDevice::manifest() {
  if (!manifest_) throw Error(ErrorCode::DeviceError, "external device has no frames_dir");
  return *manifest_;
}

std::optional<Frame> ReplayDevice::frame(std::size_t k) {
  const auto& m = manifest();
  if (k >= m.frame_count) return std::nullopt;
  return read_recorded_frame(spec_.frames_dir, m, k);
}

Frame ReplayDevice::snapshot(double settle_s) {
  if (spec_.snapshot.empty()) throw Error(ErrorCode::DeviceError, "external device has no snapshot");
  return read_ppm(spec_.snapshot, settle_s);
}

BumpObservation ReplayDevice::bump(BumpStimulus stimulus, const BumpTiming&) {
  if (spec_.bump_record.empty()) throw Error(ErrorCode::DeviceError, "external device has no bump_record");
  const auto bytes = read_file_bytes(spec_.bump_record);
  const auto rec = parse_bump_record(std::string(bytes.begin(), bytes.end()));
  BumpObservation obs;
  obs.display = rec.display;
  switch (stimulus) {
    case BumpStimulus::TapLeft: obs.events = events_from_labels(rec.left); break;
    case BumpStimulus::TapRight: obs.events = events_from_labels(rec.right); break;
    case BumpStimulus::TapBoth: obs.events = events_from_labels(rec.both); break;
  }
  return obs;
}

double base_window(const TestCase& c) {
  return std::visit(overloaded{[](const BlinkCase& b) { return b.policy.max_observation; },
                               [](const ImuCase& m) { return m.settle_s; },
                               [](const BumpCase& b) { return b.timing.settle_s; },
                               [](const RpmCase& r) { return r.policy.adopt_window; }},
                    c.params);
}

double attempt_window(double base, double factor, int attempt) {
  if (attempt < 1) throw Error(ErrorCode::InvalidArgument, "attempt must be >= 1");
  return base * std::pow(factor, attempt - 1);
}

TestVerdict run_attempt(const TestCase& c, Device& device, double window) {
  auto v = std::visit(overloaded{[&](const BlinkCase& b) { return run_blink(b, device, window); },
                                 [&](const ImuCase& m) { return run_imu(m, device, window); },
                                 [&](const BumpCase& b) { return run_bump(b, device, window); },
                                 [&](const RpmCase& r) { return run_rpm(r, device, window); }},
                      c.params);
  v.case_id = c.id;
  v.kind = c.kind();
  return v;
}

TestVerdict run_case(const TestCase& c, Device& device) {
  try {
    c.validate();
  } catch (const Error& e) {
    return error_verdict(c, e.what());
  }

  const double base = base_window(c);
  std::vector<std::string> history;
  double total = 0.0;
  for (int attempt = 1;; ++attempt) {
    const double window = attempt_window(base, c.window_extension_factor, attempt);
    TestVerdict v;
    try {
      v = run_attempt(c, device, window);
    } catch (const Error& e) {
      v = error_verdict(c, e.what());
    } catch (const std::exception& e) {
      v = error_verdict(c, std::string("internal error: ") + e.what());
    }
    total += v.duration_s;
    v.measured["window_s"] = window;

    if (v.outcome == Outcome::Inconclusive && attempt <= c.retries) {
      history.push_back("attempt " + std::to_string(attempt) + " (window " + format_fixed(window, 3) +
                        " s): INCONCLUSIVE" + (v.reason_log.empty() ? "" : ": " + v.reason_log.front()));
      continue;
    }
    v.attempts = attempt;
    v.duration_s = total;
    v.reason_log.insert(v.reason_log.begin(), history.begin(), history.end());
    if (v.outcome == Outcome::Error && v.reason_log.empty()) v.reason_log.push_back("error");
    return v;
  }
}

HookResult run_hooks(const TestPlan& plan) {
  HookResult r;
  if (plan.build_hook) r.ok = run_hook("build_hook", *plan.build_hook, plan.workdir, r.log);
  if (r.ok && plan.flash_hook) r.ok = run_hook("flash_hook", *plan.flash_hook, plan.workdir, r.log);
  return r;
}

std::uint64_t effective_seed(const TestPlan& plan, std::optional<std::uint64_t> cli_seed) {
  if (cli_seed) return *cli_seed;
  if (const char* env = std::getenv("ACT_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || *env == '-') throw Error(ErrorCode::InvalidConfig, "ACT_SEED must be an unsigned integer");
    return v;
  }
  return plan.seed;
}

std::unique_ptr<Device> make_device(const TestPlan& plan, std::uint64_t seed) {
  return std::visit(overloaded{[&](const SimDeviceSpec& s) -> std::unique_ptr<Device> {
                                 SimConfig cfg = s.config;
                                 cfg.seed = seed;
                                 return std::make_unique<SimDevice>(cfg, s.fault);
                               },
                               [](const ExternalDeviceSpec& e) -> std::unique_ptr<Device> {
                                 return std::make_unique<ReplayDevice>(e);
                               }},
                    plan.device);
}

std::vector<TestVerdict> run_plan(const TestPlan& plan, const RunOptions& options) {
  std::vector<TestVerdict> out;
  auto fail_all = [&](const std::vector<std::string>& log) {
    for (const auto& c : plan.cases) {
      auto v = error_verdict(c, "infrastructure failure before the case ran");
      v.reason_log.insert(v.reason_log.end(), log.begin(), log.end());
      out.push_back(std::move(v));
    }
    return out;
  };

  std::vector<std::string> hook_log;
  if (options.run_hooks) {
    auto hooks = run_hooks(plan);
    if (!hooks.ok) return fail_all(hooks.log);
    hook_log = std::move(hooks.log);
  }

  std::unique_ptr<Device> device;
  try {
    device = make_device(plan, effective_seed(plan, options.seed));
  } catch (const Error& e) {
    return fail_all({e.what()});
  }

  for (const auto& c : plan.cases) {
    auto v = run_case(c, *device);
    v.reason_log.insert(v.reason_log.begin(), hook_log.begin(), hook_log.end());
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace act
