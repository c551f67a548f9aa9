// SPDX-License-Identifier: Apache-2.0

#include "act/plan.hpp"

#include <algorithm>

#include "act/error.hpp"
#include "act/ppm.hpp"

namespace act {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json roi_json(const Roi& r) { return json::array({r.x, r.y, r.w, r.h}); }

Roi roi_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::ParseError, "roi must be [x, y, w, h]");
  return Roi{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

json range_json(const HsvRange& r) {
  return {{"hue_lo", r.hue_lo}, {"hue_hi", r.hue_hi}, {"sat_lo", r.sat_lo},
          {"sat_hi", r.sat_hi}, {"val_lo", r.val_lo}, {"val_hi", r.val_hi}};
}

HsvRange range_from(const json& j) {
  HsvRange r;
  r.hue_lo = j.value("hue_lo", r.hue_lo);
  r.hue_hi = j.value("hue_hi", r.hue_hi);
  r.sat_lo = j.value("sat_lo", r.sat_lo);
  r.sat_hi = j.value("sat_hi", r.sat_hi);
  r.val_lo = j.value("val_lo", r.val_lo);
  r.val_hi = j.value("val_hi", r.val_hi);
  r.validate();
  return r;
}

TestCase case_from(const json& j) {
  TestCase c;
  c.id = j.at("id").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  c.retries = j.value("retries", c.retries);
  c.window_extension_factor = j.value("window_extension_factor", c.window_extension_factor);
  const json pol = j.value("policy", json::object());

  if (kind == "blink") {
    BlinkCase b;
    b.expected_period_s = j.at("expected_period_s").get<double>();
    b.policy.active_pixel_threshold = pol.value("active_pixel_threshold", b.policy.active_pixel_threshold);
    b.policy.tolerance_fraction = pol.value("tolerance_fraction", b.policy.tolerance_fraction);
    b.policy.min_blinks = pol.value("min_blinks", b.policy.min_blinks);
    b.policy.max_flake_probability = pol.value("max_flake_probability", b.policy.max_flake_probability);
    b.policy.max_observation = pol.value("max_observation_s", b.policy.max_observation);
    if (j.contains("roi")) b.roi = roi_from(j.at("roi"));
    if (j.contains("hsv")) b.range = range_from(j.at("hsv"));
    c.params = b;
  } else if (kind == "imu") {
    ImuCase m;
    m.pitch_deg = j.value("pitch_deg", 0.0);
    m.roll_deg = j.value("roll_deg", 0.0);
    m.settle_s = j.value("settle_s", m.settle_s);
    m.policy.min_confidence = pol.value("min_confidence", m.policy.min_confidence);
    m.policy.tolerance = pol.value("tolerance_deg", m.policy.tolerance);
    m.policy.allow_compound_tilt = pol.value("allow_compound_tilt", m.policy.allow_compound_tilt);
    c.params = m;
  } else if (kind == "bump") {
    BumpCase b;
    b.timing.press_s = j.value("press_s", b.timing.press_s);
    b.timing.settle_s = j.value("settle_s", b.timing.settle_s);
    c.params = b;
  } else if (kind == "rpm") {
    RpmCase r;
    if (j.contains("duty_cycle")) r.duty_cycle = j.at("duty_cycle").get<double>();
    if (j.contains("expected_rpm")) r.expected_rpm = j.at("expected_rpm").get<double>();
    if (j.contains("calibration")) {
      r.calibration.entries.clear();
      for (const auto& e : j.at("calibration")) r.calibration.entries.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    }
    r.calibration.max_noload_rpm = j.value("max_noload_rpm", r.calibration.max_noload_rpm);
    r.policy.window = pol.value("window_s", r.policy.window);
    r.policy.cv_max = pol.value("cv_max", r.policy.cv_max);
    r.policy.range_abs = pol.value("range_abs_rpm", r.policy.range_abs);
    r.policy.range_rel = pol.value("range_rel", r.policy.range_rel);
    r.policy.trend_max = pol.value("trend_max_rpm_per_s", r.policy.trend_max);
    r.policy.adopt_window = pol.value("adopt_window_s", r.policy.adopt_window);
    c.params = r;
  } else {
    throw Error(ErrorCode::ParseError, "case '" + c.id + "': unknown kind '" + kind + "'");
  }
  return c;
}

json case_json(const TestCase& c) {
  json j{{"id", c.id}, {"kind", c.kind()}, {"retries", c.retries}, {"window_extension_factor", c.window_extension_factor}};
  std::visit(overloaded{
                 [&](const BlinkCase& b) {
                   j["expected_period_s"] = b.expected_period_s;
                   j["policy"] = {{"active_pixel_threshold", b.policy.active_pixel_threshold},
                                  {"tolerance_fraction", b.policy.tolerance_fraction},
                                  {"min_blinks", b.policy.min_blinks},
                                  {"max_flake_probability", b.policy.max_flake_probability},
                                  {"max_observation_s", b.policy.max_observation}};
                   if (b.roi) j["roi"] = roi_json(*b.roi);
                   if (b.range) j["hsv"] = range_json(*b.range);
                 },
                 [&](const ImuCase& m) {
                   j["pitch_deg"] = m.pitch_deg;
                   j["roll_deg"] = m.roll_deg;
                   j["settle_s"] = m.settle_s;
                   j["policy"] = {{"min_confidence", m.policy.min_confidence},
                                  {"tolerance_deg", m.policy.tolerance},
                                  {"allow_compound_tilt", m.policy.allow_compound_tilt}};
                 },
                 [&](const BumpCase& b) {
                   j["press_s"] = b.timing.press_s;
                   j["settle_s"] = b.timing.settle_s;
                 },
                 [&](const RpmCase& r) {
                   if (r.duty_cycle) j["duty_cycle"] = *r.duty_cycle;
                   if (r.expected_rpm) j["expected_rpm"] = *r.expected_rpm;
                   j["calibration"] = json::array();
                   for (const auto& [d, rpm] : r.calibration.entries) j["calibration"].push_back({d, rpm});
                   j["max_noload_rpm"] = r.calibration.max_noload_rpm;
                   j["policy"] = {{"window_s", r.policy.window},
                                  {"cv_max", r.policy.cv_max},
                                  {"range_abs_rpm", r.policy.range_abs},
                                  {"range_rel", r.policy.range_rel},
                                  {"trend_max_rpm_per_s", r.policy.trend_max},
                                  {"adopt_window_s", r.policy.adopt_window}};
                 },
             },
             c.params);
  return j;
}

}  // namespace

double RpmCase::target_rpm() const {
  if (expected_rpm) return *expected_rpm;
  if (duty_cycle) return calibration.expected_rpm(*duty_cycle);
  throw Error(ErrorCode::InvalidConfig, "rpm case needs duty_cycle or expected_rpm");
}

std::string TestCase::kind() const {
  return std::visit(overloaded{[](const BlinkCase&) { return std::string("blink"); },
                               [](const ImuCase&) { return std::string("imu"); },
                               [](const BumpCase&) { return std::string("bump"); },
                               [](const RpmCase&) { return std::string("rpm"); }},
                    params);
}

void TestCase::validate() const {
  auto fail = [this](const std::string& m) { throw Error(ErrorCode::InvalidConfig, "case '" + id + "': " + m); };
  if (id.empty()) fail("id must not be empty");
  if (retries < 0) fail("retries must be >= 0");
  if (!(window_extension_factor > 1.0)) fail("window_extension_factor must be > 1");
  try {
    std::visit(overloaded{
                   [](const BlinkCase& b) {
                     b.policy.validate();
                     if (!(b.expected_period_s > 0)) throw Error(ErrorCode::InvalidConfig, "expected_period_s must be > 0");
                     if (b.range) b.range->validate();
                   },
                   [](const ImuCase& m) {
                     m.policy.validate();
                     if (!(m.settle_s >= 0)) throw Error(ErrorCode::InvalidConfig, "settle_s must be >= 0");
                   },
                   [](const BumpCase& b) {
                     if (!(b.timing.press_s > 0 && b.timing.settle_s >= b.timing.press_s)) {
                       throw Error(ErrorCode::InvalidConfig, "bump timing must satisfy 0 < press_s <= settle_s");
                     }
                   },
                   [](const RpmCase& r) {
                     r.policy.validate();
                     r.calibration.validate();
                     (void)r.target_rpm();
                   },
               },
               params);
  } catch (const Error& e) {
    fail(e.what());
  }
}

void TestPlan::validate() const {
  if (plan_id.empty()) throw Error(ErrorCode::InvalidConfig, "plan_id must not be empty");
  if (cases.empty()) throw Error(ErrorCode::InvalidConfig, "plan must contain at least one case");
  std::vector<std::string> ids;
  for (const auto& c : cases) {
    c.validate();
    ids.push_back(c.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw Error(ErrorCode::InvalidConfig, "duplicate case id");
  if (const auto* sim = std::get_if<SimDeviceSpec>(&device)) {
    sim->config.validate();
    sim->fault.validate();
  }
}

TestPlan parse_plan(const json& doc) {
  TestPlan p;
  try {
    p.plan_id = doc.at("plan_id").get<std::string>();
    p.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("trigger")) {
      const auto& t = doc.at("trigger");
      p.trigger.labels = t.value("labels", std::vector<std::string>{});
      p.trigger.on_merge_request = t.value("on_merge_request", false);
    }
    if (doc.contains("build_hook")) p.build_hook = doc.at("build_hook").get<std::string>();
    if (doc.contains("flash_hook")) p.flash_hook = doc.at("flash_hook").get<std::string>();
    if (doc.contains("workdir")) p.workdir = doc.at("workdir").get<std::string>();

    const json dev = doc.value("device", json{{"type", "sim"}});
    const auto type = dev.value("type", std::string("sim"));
    if (type == "sim") {
      SimDeviceSpec s;
      if (dev.contains("config")) from_json(dev.at("config"), s.config);
      if (dev.contains("fault")) from_json(dev.at("fault"), s.fault);
      p.device = s;
    } else if (type == "external") {
      ExternalDeviceSpec e;
      e.frames_dir = dev.value("frames_dir", std::string());
      e.snapshot = dev.value("snapshot", std::string());
      e.bump_record = dev.value("bump_record", std::string());
      p.device = e;
    } else {
      throw Error(ErrorCode::ParseError, "device type must be sim or external");
    }

    for (const auto& c : doc.at("cases")) p.cases.push_back(case_from(c));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("plan: ") + e.what());
  }
  p.validate();
  return p;
}

TestPlan load_plan(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return parse_plan(doc);
}

json plan_to_json(const TestPlan& plan) {
  json j{{"plan_id", plan.plan_id},
         {"seed", plan.seed},
         {"trigger", {{"labels", plan.trigger.labels}, {"on_merge_request", plan.trigger.on_merge_request}}}};
  if (plan.build_hook) j["build_hook"] = *plan.build_hook;
  if (plan.flash_hook) j["flash_hook"] = *plan.flash_hook;
  if (plan.workdir) j["workdir"] = plan.workdir->string();
  std::visit(overloaded{
                 [&](const SimDeviceSpec& s) {
                   json cfg;
                   to_json(cfg, s.config);
                   j["device"] = {{"type", "sim"}, {"config", cfg}, {"fault", s.fault.to_string()}};
                 },
                 [&](const ExternalDeviceSpec& e) {
                   j["device"] = {{"type", "external"},
                                  {"frames_dir", e.frames_dir.string()},
                                  {"snapshot", e.snapshot.string()},
                                  {"bump_record", e.bump_record.string()}};
                 },
             },
             plan.device);
  j["cases"] = json::array();
  for (const auto& c : plan.cases) j["cases"].push_back(case_json(c));
  return j;
}

bool should_trigger(const TestPlan& plan, const TriggerEvent& event) {
  const auto& t = plan.trigger;
  if (t.labels.empty() && !t.on_merge_request) return true;
  if (t.on_merge_request && event.is_merge_request) return true;
  for (const auto& l : event.labels) {
    if (std::find(t.labels.begin(), t.labels.end(), l) != t.labels.end()) return true;
  }
  return false;
}

}  // namespace act
