// SPDX-License-Identifier: Apache-2.0

#include "act/replay.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "act/error.hpp"
#include "act/ppm.hpp"

namespace act {

namespace fs = std::filesystem;
using nlohmann::json;

json FrameManifest::to_json() const {
  json j = extra.is_object() ? extra : json::object();
  j["fps"] = fps;
  j["width"] = width;
  j["height"] = height;
  j["frame_count"] = frame_count;
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["fault"] = fault;
  j["sim_config"] = sim_config;
  return j;
}

FrameManifest FrameManifest::from_json(const json& j) {
  FrameManifest m;
  try {
    m.fps = j.at("fps").get<double>();
    m.width = j.value("width", 0);
    m.height = j.value("height", 0);
    m.frame_count = j.value("frame_count", std::size_t{0});
    m.scenario = j.value("scenario", std::string());
    m.seed = j.value("seed", std::uint64_t{0});
    m.fault = j.value("fault", std::string("none"));
    m.sim_config = j.value("sim_config", json::object());
    for (auto it = j.begin(); it != j.end(); ++it) {
      static const char* known[] = {"fps", "width", "height", "frame_count", "scenario", "seed", "fault", "sim_config"};
      bool is_known = false;
      for (const char* k : known) is_known = is_known || it.key() == k;
      if (!is_known) m.extra[it.key()] = it.value();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
  if (!(m.fps > 0.0)) throw Error(ErrorCode::ParseError, "manifest: fps must be > 0");
  return m;
}

FrameManifest read_manifest(const fs::path& dir) {
  const auto bytes = read_file_bytes(dir / kManifestName);
  try {
    return FrameManifest::from_json(json::parse(bytes.begin(), bytes.end()));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, (dir / kManifestName).string() + ": " + e.what());
  }
}

void write_manifest(const fs::path& dir, const FrameManifest& m) {
  write_file_bytes(dir / kManifestName, m.to_json().dump(2) + "\n");
}

Frame read_recorded_frame(const fs::path& dir, const FrameManifest& m, std::size_t k) {
  return read_ppm(dir / frame_filename(k), static_cast<double>(k) / m.fps);
}

namespace {

std::vector<std::string> csv_lines(const fs::path& path, const std::string& header) {
  const auto bytes = read_file_bytes(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  std::vector<std::string> lines;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      if (line != header) throw Error(ErrorCode::ParseError, path.string() + ": expected header '" + header + "'");
      first = false;
      continue;
    }
    if (!line.empty()) lines.push_back(line);
  }
  if (first) throw Error(ErrorCode::ParseError, path.string() + ": empty file");
  return lines;
}

double parse_number(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, where + ": bad number '" + s + "'");
  }
  return v;
}

std::pair<std::string, std::string> split2(const std::string& line, const std::string& where) {
  const auto comma = line.find(',');
  if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
    throw Error(ErrorCode::ParseError, where + ": expected two columns");
  }
  return {line.substr(0, comma), line.substr(comma + 1)};
}

}  // namespace

std::vector<BlinkSample> read_blink_csv(const fs::path& path) {
  std::vector<BlinkSample> out;
  std::size_t row = 1;
  for (const auto& line : csv_lines(path, "t_s,active_pixels")) {
    const std::string where = path.string() + ":" + std::to_string(++row);
    const auto [a, b] = split2(line, where);
    const double n = parse_number(b, where);
    if (n < 0 || n != std::floor(n)) throw Error(ErrorCode::ParseError, where + ": active_pixels must be a count");
    out.push_back({parse_number(a, where), static_cast<std::size_t>(n)});
  }
  return out;
}

std::vector<AngleSample> read_angle_csv(const fs::path& path) {
  std::vector<AngleSample> out;
  std::size_t row = 1;
  for (const auto& line : csv_lines(path, "t_s,angle_rad")) {
    const std::string where = path.string() + ":" + std::to_string(++row);
    const auto [a, b] = split2(line, where);
    AngleSample s{parse_number(a, where), std::nullopt};
    if (!b.empty()) s.angle = parse_number(b, where);
    out.push_back(s);
  }
  return out;
}

std::string blink_csv(const std::vector<BlinkSample>& samples) {
  std::string out = "t_s,active_pixels\n";
  for (const auto& s : samples) out += format_fixed(s.t, 9) + "," + std::to_string(s.active_pixels) + "\n";
  return out;
}

std::string angle_csv(const std::vector<AngleSample>& samples) {
  std::string out = "t_s,angle_rad\n";
  for (const auto& s : samples) {
    out += format_fixed(s.t, 9) + ",";
    // Angles keep full precision so unwrapping a replay matches the live run.
    if (s.angle) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", *s.angle);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::vector<BlinkSample> blink_series(const fs::path& dir, const Roi& roi, const HsvRange& range) {
  const auto m = read_manifest(dir);
  std::vector<BlinkSample> out;
  out.reserve(m.frame_count);
  for (std::size_t k = 0; k < m.frame_count; ++k) {
    const Frame f = read_recorded_frame(dir, m, k);
    out.push_back({f.timestamp(), count_active(f, range, roi)});
  }
  return out;
}

std::vector<AngleSample> angle_series(const fs::path& dir, const MarkerConfig& cfg) {
  const auto m = read_manifest(dir);
  std::vector<AngleSample> out;
  out.reserve(m.frame_count);
  for (std::size_t k = 0; k < m.frame_count; ++k) {
    const Frame f = read_recorded_frame(dir, m, k);
    out.push_back({f.timestamp(), track_angle(f, cfg)});
  }
  return out;
}

BlinkEstimate fold_blink(const std::vector<BlinkSample>& samples, double expected_period, const BlinkPolicy& policy) {
  BlinkEstimate st(expected_period);
  for (const auto& s : samples) st = ingest(std::move(st), s.active_pixels, s.t, policy);
  return st;
}

PlotTable blink_plot(const BlinkEstimate& state) {
  PlotTable p;
  p.columns = {{"elapsed_s", false}, {"deviation", false}};
  for (const auto& [t, d] : state.deviation_trace) p.rows.push_back({t, d});
  return p;
}

TestVerdict analyze_blink(const std::vector<BlinkSample>& samples, double expected_period, const BlinkPolicy& policy) {
  policy.validate();
  const auto st = fold_blink(samples, expected_period, policy);
  auto v = blink_verdict(st, expected_period, policy);
  v.plot = blink_plot(st);
  return v;
}

RpmTrace fold_angles(const std::vector<AngleSample>& samples) {
  RpmTrace tr;
  for (const auto& s : samples) {
    if (s.angle) tr = accumulate(std::move(tr), *s.angle, s.t);
  }
  return tr;
}

TestVerdict analyze_rpm(const std::vector<AngleSample>& samples, double expected_rpm, const StabilityPolicy& policy,
                        const MotorCalibrationTable& table) {
  policy.validate();
  const auto tr = fold_angles(samples);
  auto v = rpm_verdict(tr, expected_rpm, policy, table);
  v.plot = rpm_plot(tr, policy);
  return v;
}

}  // namespace act
