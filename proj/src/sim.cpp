// SPDX-License-Identifier: Apache-2.0

#include "act/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "act/error.hpp"

namespace act {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double hashed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  const std::uint64_t h = mix64(mix64(mix64(seed) ^ stream) ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

namespace {

constexpr std::uint64_t kStreamWheel = 0x57484545;  // "WHEE"
constexpr std::uint64_t kStreamPixel = 0x50495845;  // "PIXE"

constexpr Rgb kBackground{30, 30, 30};
constexpr Rgb kLedOff{60, 20, 20};
constexpr Rgb kWheelBody{80, 80, 80};
constexpr Rgb kPanel{0, 0, 0};
constexpr Rgb kText{255, 255, 255};
constexpr Rgb kDistractor{0, 255, 0};
constexpr Roi kDisplayPanel{4, 152, 200, 60};

Rgb hue_color(double hue) { return hsv_to_rgb({hue, 1.0, 1.0}); }

HsvRange hue_band(double center, double half_width) {
  HsvRange r;
  r.hue_lo = std::fmod(center - half_width + 360.0, 360.0);
  r.hue_hi = std::fmod(center + half_width, 360.0);
  r.sat_lo = 0.5;
  r.val_lo = 0.5;
  return r;
}

void fill_disk(Frame& f, double cx, double cy, double r, Rgb c) {
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
  const int x1 = std::min(f.width() - 1, static_cast<int>(std::ceil(cx + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
  const int y1 = std::min(f.height() - 1, static_cast<int>(std::ceil(cy + r)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy <= r * r) f.set(x, y, c);
    }
  }
}

void fill_rect(Frame& f, const Roi& r, Rgb c) {
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) f.set(x, y, c);
  }
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s = buf;
  if (s.size() > 8) s.resize(8);
  return s;
}

bool bad(double v) { return !std::isfinite(v); }

}  // namespace

void SimConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, "sim: " + m); };
  if (!(fps > 0.0) || bad(fps)) fail("fps must be > 0");
  if (width < 1 || height < 1) fail("frame dimensions must be >= 1");
  if (!(led.duty > 0.0 && led.duty < 1.0)) fail("led duty must be in (0,1)");
  if (!(led.period > 0.0) || bad(led.period)) fail("led period must be > 0");
  if (led.radius < 1) fail("led radius must be >= 1");
  if (!(wheel.rpm >= 0.0) || bad(wheel.rpm)) fail("wheel rpm must be >= 0");
  if (!(wheel.ripple_rpm >= 0.0)) fail("wheel ripple must be >= 0");
  if (!(pixel_noise >= 0.0)) fail("pixel noise must be >= 0");
  if (!(imu.noise_deg >= 0.0)) fail("imu noise must be >= 0");
  if (!led.roi.fits(width, height)) fail("led roi outside frame");
  const auto m = marker_config();
  if (!m.center_roi.fits(width, height) || !m.edge_roi.fits(width, height)) fail("wheel does not fit in frame");
  try {
    display.validate(width, height);
  } catch (const Error& e) {
    fail(e.what());
  }
}

HsvRange SimConfig::led_range() const { return hue_band(led.hue, 20.0); }

MarkerConfig SimConfig::marker_config() const {
  MarkerConfig m;
  m.center_range = hue_band(wheel.center_hue, 20.0);
  m.edge_range = hue_band(wheel.marker_hue, 20.0);
  const int cx = static_cast<int>(std::lround(wheel.center.x));
  const int cy = static_cast<int>(std::lround(wheel.center.y));
  const int cr = static_cast<int>(std::ceil(wheel.marker_radius)) + 6;
  m.center_roi = Roi{cx - cr, cy - cr, 2 * cr + 1, 2 * cr + 1};
  const int er = static_cast<int>(std::ceil(wheel.radius + wheel.marker_radius)) + 3;
  m.edge_roi = Roi{cx - er, cy - er, 2 * er + 1, 2 * er + 1};
  return m;
}

std::string_view to_string(FaultSide s) noexcept {
  switch (s) {
    case FaultSide::Left: return "left";
    case FaultSide::Right: return "right";
    case FaultSide::Both: return "both";
  }
  return "left";
}

void FaultSpec::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, "fault: " + m); };
  switch (kind) {
    case Kind::LedWrongPeriod:
    case Kind::MotorSpeedError:
      if (!(factor > 0.0) || bad(factor)) fail("factor must be > 0");
      break;
    case Kind::ImuCalibrationError:
      if (!(scale > 0.0) || bad(scale) || bad(offset)) fail("calibration scale must be > 0");
      break;
    case Kind::DisplayPartial:
      if (!(fraction > 0.0 && fraction <= 1.0)) fail("blanked fraction must be in (0,1]");
      break;
    default: break;
  }
}

namespace {

FaultSide parse_side(const std::string& s) {
  if (s == "left") return FaultSide::Left;
  if (s == "right") return FaultSide::Right;
  if (s == "both") return FaultSide::Both;
  throw Error(ErrorCode::ParseError, "fault: side must be left|right|both, got '" + s + "'");
}

double parse_number(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "fault: expected a number, got '" + s + "'");
  }
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

FaultSpec FaultSpec::parse(std::string_view text) {
  const std::string t(text);
  const auto colon = t.find(':');
  const std::string name = t.substr(0, colon);
  const std::string arg = colon == std::string::npos ? std::string() : t.substr(colon + 1);
  auto need_arg = [&] {
    if (arg.empty()) throw Error(ErrorCode::ParseError, "fault: '" + name + "' needs an argument");
  };

  FaultSpec f;
  if (name == "none" || name.empty()) {
    f = none();
  } else if (name == "led_wrong_period") {
    need_arg();
    f = led_wrong_period(parse_number(arg));
  } else if (name == "led_stuck") {
    if (arg != "on" && arg != "off") throw Error(ErrorCode::ParseError, "fault: led_stuck takes on|off");
    f = led_stuck(arg == "on");
  } else if (name == "imu_calibration") {
    need_arg();
    const auto comma = arg.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::ParseError, "fault: imu_calibration takes SCALE,OFFSET");
    f = imu_calibration(parse_number(arg.substr(0, comma)), parse_number(arg.substr(comma + 1)));
  } else if (name == "display_no_output") {
    f = display_no_output();
  } else if (name == "display_partial") {
    f = display_partial(arg.empty() ? 0.5 : parse_number(arg));
  } else if (name == "bump_dead") {
    need_arg();
    f = bump_dead(parse_side(arg));
  } else if (name == "bump_swapped") {
    need_arg();
    f = bump_swapped(parse_side(arg));
  } else if (name == "motor_speed") {
    need_arg();
    f = motor_speed(parse_number(arg));
  } else {
    throw Error(ErrorCode::ParseError, "fault: unknown kind '" + name + "'");
  }
  f.validate();
  return f;
}

std::string FaultSpec::to_string() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::LedWrongPeriod: return "led_wrong_period:" + num(factor);
    case Kind::LedStuck: return std::string("led_stuck:") + (stuck_on ? "on" : "off");
    case Kind::ImuCalibrationError: return "imu_calibration:" + num(scale) + "," + num(offset);
    case Kind::DisplayNoOutput: return "display_no_output";
    case Kind::DisplayPartial: return "display_partial:" + num(fraction);
    case Kind::BumpDeadSensor: return "bump_dead:" + std::string(act::to_string(side));
    case Kind::BumpSwappedMapping: return "bump_swapped:" + std::string(act::to_string(side));
    case Kind::MotorSpeedError: return "motor_speed:" + num(factor);
  }
  return "none";
}

void to_json(nlohmann::json& j, const FaultSpec& f) { j = f.to_string(); }

void from_json(const nlohmann::json& j, FaultSpec& f) {
  if (j.is_null()) {
    f = FaultSpec::none();
    return;
  }
  if (!j.is_string()) throw Error(ErrorCode::ParseError, "fault must be a string such as \"bump_dead:left\"");
  f = FaultSpec::parse(j.get<std::string>());
}

void to_json(nlohmann::json& j, const SimConfig& c) {
  j = nlohmann::json{
      {"fps", c.fps},
      {"width", c.width},
      {"height", c.height},
      {"seed", c.seed},
      {"pixel_noise", c.pixel_noise},
      {"led",
       {{"roi", {c.led.roi.x, c.led.roi.y, c.led.roi.w, c.led.roi.h}},
        {"hue", c.led.hue},
        {"period", c.led.period},
        {"duty", c.led.duty},
        {"phase", c.led.phase},
        {"radius", c.led.radius}}},
      {"wheel",
       {{"center", {c.wheel.center.x, c.wheel.center.y}},
        {"radius", c.wheel.radius},
        {"rpm", c.wheel.rpm},
        {"start_angle", c.wheel.start_angle},
        {"center_hue", c.wheel.center_hue},
        {"marker_hue", c.wheel.marker_hue},
        {"marker_radius", c.wheel.marker_radius},
        {"ripple_rpm", c.wheel.ripple_rpm}}},
      {"imu", {{"noise_deg", c.imu.noise_deg}, {"allow_compound_tilt", c.imu.allow_compound_tilt}}},
  };
}

void from_json(const nlohmann::json& j, SimConfig& c) {
  try {
    c.fps = j.value("fps", c.fps);
    c.width = j.value("width", c.width);
    c.height = j.value("height", c.height);
    c.seed = j.value("seed", c.seed);
    c.pixel_noise = j.value("pixel_noise", c.pixel_noise);
    if (j.contains("led")) {
      const auto& l = j.at("led");
      if (l.contains("roi")) {
        const auto& r = l.at("roi");
        c.led.roi = Roi{r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>(), r.at(3).get<int>()};
      }
      c.led.hue = l.value("hue", c.led.hue);
      c.led.period = l.value("period", c.led.period);
      c.led.duty = l.value("duty", c.led.duty);
      c.led.phase = l.value("phase", c.led.phase);
      c.led.radius = l.value("radius", c.led.radius);
    }
    if (j.contains("wheel")) {
      const auto& w = j.at("wheel");
      if (w.contains("center")) c.wheel.center = {w.at("center").at(0).get<double>(), w.at("center").at(1).get<double>()};
      c.wheel.radius = w.value("radius", c.wheel.radius);
      c.wheel.rpm = w.value("rpm", c.wheel.rpm);
      c.wheel.start_angle = w.value("start_angle", c.wheel.start_angle);
      c.wheel.center_hue = w.value("center_hue", c.wheel.center_hue);
      c.wheel.marker_hue = w.value("marker_hue", c.wheel.marker_hue);
      c.wheel.marker_radius = w.value("marker_radius", c.wheel.marker_radius);
      c.wheel.ripple_rpm = w.value("ripple_rpm", c.wheel.ripple_rpm);
    }
    if (j.contains("imu")) {
      const auto& m = j.at("imu");
      c.imu.noise_deg = m.value("noise_deg", c.imu.noise_deg);
      c.imu.allow_compound_tilt = m.value("allow_compound_tilt", c.imu.allow_compound_tilt);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("sim config: ") + e.what());
  }
}

bool led_on(const SimConfig& cfg, const FaultSpec& fault, double t) {
  if (fault.kind == FaultSpec::Kind::LedStuck) return fault.stuck_on;
  const double period = cfg.led.period * (fault.kind == FaultSpec::Kind::LedWrongPeriod ? fault.factor : 1.0);
  double phase = std::fmod(t + cfg.led.phase, period);
  if (phase < 0) phase += period;
  return phase < cfg.led.duty * period;
}

double wheel_angle(const SimConfig& cfg, const FaultSpec& fault, double t) {
  const double rpm = cfg.wheel.rpm * (fault.kind == FaultSpec::Kind::MotorSpeedError ? fault.factor : 1.0);
  double a = cfg.wheel.start_angle + 2.0 * std::numbers::pi * (rpm / 60.0) * t;
  if (cfg.wheel.ripple_rpm > 0.0 && rpm != 0.0) {
    const double amp = cfg.wheel.ripple_rpm * 2.0 * std::numbers::pi / 60.0 / cfg.fps / 2.0;
    const auto k = static_cast<std::uint64_t>(std::llround(t * cfg.fps));
    a += amp * hashed_uniform(cfg.seed, kStreamWheel, k);
  }
  return a;
}

Frame render_frame(const SimConfig& cfg, const FaultSpec& fault, double t, const DisplayedImu& imu) {
  cfg.validate();
  fault.validate();
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sim: t must be >= 0");

  Frame f(cfg.width, cfg.height, t);
  fill_rect(f, Roi{0, 0, cfg.width, cfg.height}, kBackground);

  // Status LED plus an always-on distractor of a different hue outside the ROI.
  const double lx = cfg.led.roi.x + (cfg.led.roi.w - 1) / 2.0;
  const double ly = cfg.led.roi.y + (cfg.led.roi.h - 1) / 2.0;
  fill_disk(f, lx, ly, cfg.led.radius, led_on(cfg, fault, t) ? hue_color(cfg.led.hue) : kLedOff);
  if (lx + 40 + cfg.led.radius < cfg.width) fill_disk(f, lx + 40, ly, cfg.led.radius, kDistractor);

  // Wheel.
  const auto& w = cfg.wheel;
  fill_disk(f, w.center.x, w.center.y, w.radius + 2.0 * w.marker_radius, kWheelBody);
  fill_disk(f, w.center.x, w.center.y, w.marker_radius, hue_color(w.center_hue));
  const double a = wheel_angle(cfg, fault, t);
  fill_disk(f, w.center.x + w.radius * std::cos(a), w.center.y + w.radius * std::sin(a), w.marker_radius,
            hue_color(w.marker_hue));

  // Display.
  if (kDisplayPanel.fits(f)) fill_rect(f, kDisplayPanel, kPanel);
  if (fault.kind != FaultSpec::Kind::DisplayNoOutput) {
    const auto& atlas = GlyphAtlas::builtin();
    const auto& layout = cfg.display;
    for (const auto& line : layout.lines) {
      draw_text(f, atlas, line.label_x, line.label_y, line.label, layout.scale, kText);
      const double v = line.label == "Roll" ? imu.roll : imu.pitch;
      draw_text(f, atlas, line.value_box.x, line.value_box.y, format_value(v), layout.scale, kText);
      if (fault.kind == FaultSpec::Kind::DisplayPartial) {
        const int keep = kGlyphHeight - static_cast<int>(std::ceil(fault.fraction * kGlyphHeight - 1e-9));
        const int y0 = line.label_y + keep * layout.scale;
        const int y1 = std::min(cfg.height, line.value_box.y + layout.cell_height());
        for (int y = std::max(0, y0); y < y1; ++y) {
          for (int x = 0; x < cfg.width; ++x) {
            if (f.at(x, y) == kText) f.set(x, y, kPanel);
          }
        }
      }
    }
  }

  if (cfg.pixel_noise > 0.0) {
    const auto k = static_cast<std::uint64_t>(std::llround(t * cfg.fps));
    auto px = f.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
      const double n = cfg.pixel_noise * hashed_uniform(cfg.seed ^ mix64(k), kStreamPixel, i);
      px[i] = static_cast<std::uint8_t>(std::clamp<long>(std::lround(px[i] + n), 0, 255));
    }
  }
  return f;
}

BumpObservation bump_response(const SimConfig& /*cfg*/, const FaultSpec& fault, BumpStimulus stimulus,
                              const BumpTiming& timing) {
  bool left = stimulus == BumpStimulus::TapLeft || stimulus == BumpStimulus::TapBoth;
  bool right = stimulus == BumpStimulus::TapRight || stimulus == BumpStimulus::TapBoth;
  DisplayStatus display = DisplayStatus::Normal;

  using K = FaultSpec::Kind;
  switch (fault.kind) {
    case K::BumpDeadSensor:
      if (fault.side == FaultSide::Both) {
        left = right = false;
        display = DisplayStatus::NoOutput;
      } else {
        (fault.side == FaultSide::Left ? left : right) = false;
        display = DisplayStatus::PartialOrMissing;
      }
      break;
    case K::BumpSwappedMapping:
      if (fault.side == FaultSide::Both) {
        left = right = false;
      } else if (fault.side == FaultSide::Left) {
        right = right || left;
        left = false;
      } else {
        left = left || right;
        right = false;
      }
      break;
    case K::DisplayNoOutput:
      // Events are only observable through the display.
      left = right = false;
      display = DisplayStatus::NoOutput;
      break;
    case K::DisplayPartial:
      display = DisplayStatus::IncorrectOrMissing;
      break;
    default: break;
  }

  BumpObservation obs;
  obs.display = display;
  if (left) obs.events.push_back({"left", timing.press_s});
  if (right) obs.events.push_back({"right", timing.press_s});
  return obs;
}

RobotSim::RobotSim(SimConfig cfg, FaultSpec fault) : cfg_(std::move(cfg)), fault_(fault), rng_(cfg_.seed) {
  cfg_.validate();
  fault_.validate();
}

void RobotSim::set_tilt(double pitch, double roll) {
  if (!(pitch >= -90.0 && pitch <= 90.0 && roll >= -90.0 && roll <= 90.0)) {
    throw Error(ErrorCode::InvalidActualAngle, "tilt must be within [-90, 90] degrees");
  }
  if (!cfg_.imu.allow_compound_tilt && pitch != 0.0 && roll != 0.0) {
    throw Error(ErrorCode::InvalidActualAngle, "only one of pitch/roll may be nonzero");
  }
  if (fault_.kind == FaultSpec::Kind::ImuCalibrationError) {
    displayed_ = {fault_.scale * pitch + fault_.offset, fault_.scale * roll + fault_.offset};
    return;
  }
  std::uniform_real_distribution<double> noise(-cfg_.imu.noise_deg, cfg_.imu.noise_deg);
  const double np = cfg_.imu.noise_deg > 0 ? noise(rng_) : 0.0;
  const double nr = cfg_.imu.noise_deg > 0 ? noise(rng_) : 0.0;
  displayed_ = {pitch + np, roll + nr};
}

void RobotSim::set_motor_rpm(double rpm) {
  if (!(rpm >= 0.0)) throw Error(ErrorCode::InvalidConfig, "sim: rpm must be >= 0");
  cfg_.wheel.rpm = rpm;
}

void RobotSim::set_motor_duty(double duty, const MotorCalibrationTable& table) {
  set_motor_rpm(table.expected_rpm(duty));
}

Frame RobotSim::frame(std::size_t k) const { return frame_at(static_cast<double>(k) / cfg_.fps); }

Frame RobotSim::frame_at(double t) const { return render_frame(cfg_, fault_, t, displayed_); }

}  // namespace act
