// SPDX-License-Identifier: Apache-2.0
//
// act: command-line front end.
//
//   act run --plan plan.json [--seed N] [--out report.json] [--junit report.xml] [--plots dir/]
//   act simulate --scenario led|wheel|display|bump [--fault spec] --out dir/
//   act analyze blink|rpm|imu|bump --input <frames-dir|csv|ppm|record> [policy flags]
//   act diagnose-bump --left R --right R --both R --display S
//   act atlas --out dir/
//
// Exit status: 0 all PASS, 1 any FAIL/INCONCLUSIVE, 2 any ERROR or usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "act/error.hpp"
#include "act/harness.hpp"
#include "act/plan.hpp"
#include "act/ppm.hpp"
#include "act/replay.hpp"
#include "act/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kUsageExit = 2;

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  act::write_file_bytes(path, text);
}

struct RunArgs {
  std::string plan;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string junit;
  std::string plots;
  bool no_hooks = false;
};

int cmd_run(const RunArgs& a) {
  const auto plan = act::load_plan(a.plan);
  act::RunOptions opts;
  opts.seed = a.seed;
  opts.run_hooks = !a.no_hooks;
  const auto verdicts = act::run_plan(plan, opts);

  const std::string report = act::emit_report(verdicts, act::ReportFormat::Json, plan.plan_id);
  if (a.out.empty()) {
    std::cout << report << "\n";
  } else {
    write_text(a.out, report + "\n");
  }
  if (!a.junit.empty()) write_text(a.junit, act::emit_report(verdicts, act::ReportFormat::JunitXml, plan.plan_id));
  if (!a.plots.empty()) {
    fs::create_directories(a.plots);
    for (const auto& [name, csv] : act::plot_files(verdicts)) act::write_file_bytes(fs::path(a.plots) / name, csv);
  }
  for (const auto& v : verdicts) {
    std::cerr << v.case_id << ": " << act::to_string(v.outcome);
    if (!v.reason_log.empty()) std::cerr << " - " << v.reason_log.back();
    std::cerr << "\n";
  }
  return act::exit_code(verdicts);
}

struct SimArgs {
  std::string scenario;
  std::string fault = "none";
  std::string out;
  std::string config;
  double duration = 2.0;
  std::optional<std::uint64_t> seed;
  std::optional<double> rpm;
  std::optional<double> period;
  double pitch = 0.0;
  double roll = 0.0;
  bool no_frames = false;
};

int cmd_simulate(const SimArgs& a) {
  act::SimConfig cfg;
  if (!a.config.empty()) {
    const auto bytes = act::read_file_bytes(a.config);
    act::from_json(json::parse(bytes.begin(), bytes.end()), cfg);
  }
  if (a.seed) cfg.seed = *a.seed;
  if (a.rpm) cfg.wheel.rpm = *a.rpm;
  if (a.period) cfg.led.period = *a.period;
  const auto fault = act::FaultSpec::parse(a.fault);
  act::RobotSim sim(cfg, fault);
  fs::create_directories(a.out);

  act::FrameManifest m;
  m.fps = cfg.fps;
  m.width = cfg.width;
  m.height = cfg.height;
  m.scenario = a.scenario;
  m.seed = cfg.seed;
  m.fault = fault.to_string();
  json cj;
  act::to_json(cj, cfg);
  m.sim_config = cj;

  if (a.scenario == "led" || a.scenario == "wheel") {
    if (!(a.duration >= 0.0)) throw act::Error(act::ErrorCode::InvalidArgument, "--duration must be >= 0");
    const auto n = static_cast<std::size_t>(std::floor(a.duration * cfg.fps + 1e-9)) + 1;
    std::vector<act::BlinkSample> blink;
    std::vector<act::AngleSample> angles;
    const auto markers = cfg.marker_config();
    const auto range = cfg.led_range();
    for (std::size_t k = 0; k < n; ++k) {
      const auto f = sim.frame(k);
      if (!a.no_frames) act::write_ppm(fs::path(a.out) / act::frame_filename(k), f);
      if (a.scenario == "led") {
        blink.push_back({f.timestamp(), act::count_active(f, range, cfg.led.roi)});
      } else {
        angles.push_back({f.timestamp(), act::track_angle(f, markers)});
      }
    }
    m.frame_count = a.no_frames ? 0 : n;
    if (a.scenario == "led") {
      act::write_file_bytes(fs::path(a.out) / "blink.csv", act::blink_csv(blink));
    } else {
      act::write_file_bytes(fs::path(a.out) / "angles.csv", act::angle_csv(angles));
    }
  } else if (a.scenario == "display") {
    sim.set_tilt(a.pitch, a.roll);
    act::write_ppm(fs::path(a.out) / "snapshot.ppm", sim.frame_at(0.0));
    m.extra["pitch_deg"] = a.pitch;
    m.extra["roll_deg"] = a.roll;
    m.extra["displayed_pitch_deg"] = sim.displayed_imu().pitch;
    m.extra["displayed_roll_deg"] = sim.displayed_imu().roll;
  } else if (a.scenario == "bump") {
    act::BumpRecord rec;
    act::DisplayStatus worst = act::DisplayStatus::Normal;
    for (auto s : act::stimulus_plan()) {
      const auto obs = act::bump_response(cfg, fault, s);
      std::vector<std::string> labels;
      for (const auto& e : obs.events) labels.push_back(e.label);
      if (s == act::BumpStimulus::TapLeft) rec.left = labels;
      if (s == act::BumpStimulus::TapRight) rec.right = labels;
      if (s == act::BumpStimulus::TapBoth) rec.both = labels;
      if (obs.display != act::DisplayStatus::Normal) worst = obs.display;
    }
    rec.display = worst;
    act::write_file_bytes(fs::path(a.out) / "bump_record.txt", act::format_bump_record(rec));
  } else {
    throw act::Error(act::ErrorCode::InvalidArgument, "unknown scenario '" + a.scenario + "'");
  }
  act::write_manifest(a.out, m);
  return 0;
}

struct AnalyzeArgs {
  std::string kind;
  std::string input;
  std::string plot;
  // blink
  double expected_period = 1.0;
  act::BlinkPolicy blink;
  // rpm
  std::optional<double> expected_rpm;
  std::optional<double> duty;
  act::StabilityPolicy stability;
  // imu
  std::optional<double> pitch;
  std::optional<double> roll;
  act::ImuPolicy imu;
};

act::SimConfig scene_for(const fs::path& dir) {
  act::SimConfig cfg;
  if (fs::exists(dir / act::kManifestName)) {
    const auto m = act::read_manifest(dir);
    if (m.sim_config.is_object() && !m.sim_config.empty()) act::from_json(m.sim_config, cfg);
  }
  return cfg;
}

int cmd_analyze(const AnalyzeArgs& a) {
  const fs::path in = a.input;
  const bool is_dir = fs::is_directory(in);
  act::TestVerdict v;

  if (a.kind == "blink") {
    std::vector<act::BlinkSample> samples;
    if (is_dir && fs::exists(in / act::kManifestName) && act::read_manifest(in).frame_count > 0) {
      const auto cfg = scene_for(in);
      samples = act::blink_series(in, cfg.led.roi, cfg.led_range());
    } else {
      samples = act::read_blink_csv(is_dir ? in / "blink.csv" : in);
    }
    v = act::analyze_blink(samples, a.expected_period, a.blink);
  } else if (a.kind == "rpm") {
    act::MotorCalibrationTable table;
    double expected = 0.0;
    if (a.expected_rpm) {
      expected = *a.expected_rpm;
    } else if (a.duty) {
      expected = table.expected_rpm(*a.duty);
    } else {
      throw act::Error(act::ErrorCode::InvalidArgument, "rpm analysis needs --expected-rpm or --duty");
    }
    std::vector<act::AngleSample> samples;
    if (is_dir && fs::exists(in / act::kManifestName) && act::read_manifest(in).frame_count > 0) {
      samples = act::angle_series(in, scene_for(in).marker_config());
    } else {
      samples = act::read_angle_csv(is_dir ? in / "angles.csv" : in);
    }
    v = act::analyze_rpm(samples, expected, a.stability, table);
  } else if (a.kind == "imu") {
    double pitch = a.pitch.value_or(0.0);
    double roll = a.roll.value_or(0.0);
    fs::path snap = in;
    act::DisplayLayout layout = act::default_display_layout();
    if (is_dir) {
      snap = in / "snapshot.ppm";
      layout = scene_for(in).display;
      const auto m = act::read_manifest(in);
      if (!a.pitch) pitch = m.extra.value("pitch_deg", 0.0);
      if (!a.roll) roll = m.extra.value("roll_deg", 0.0);
    }
    a.imu.validate();
    const auto tokens = act::TemplateRecognizer().recognize(act::read_ppm(snap), layout);
    v = act::imu_verdict(act::parse_reading(tokens, a.imu), pitch, roll, a.imu);
  } else if (a.kind == "bump") {
    const auto bytes = act::read_file_bytes(is_dir ? in / "bump_record.txt" : in);
    const auto rec = act::parse_bump_record(std::string(bytes.begin(), bytes.end()));
    const auto d = act::diagnose_record(rec);
    v.kind = "bump";
    v.measured["diagnosis"] = std::string(act::to_string(d.diagnosis));
    v.measured["row"] = d.row;
    v.outcome = d.diagnosis == act::Diagnosis::SensorsOperatingCorrectly ? act::Outcome::Pass
                : d.diagnosis == act::Diagnosis::Undetermined             ? act::Outcome::Inconclusive
                                                                          : act::Outcome::Fail;
    v.reason_log.push_back("diagnosis " + std::string(act::to_string(d.diagnosis)) + ": " + d.row);
  } else {
    throw act::Error(act::ErrorCode::InvalidArgument, "unknown analysis '" + a.kind + "'");
  }

  v.case_id = in.filename().string().empty() ? a.kind : in.filename().string();
  v.kind = a.kind;
  const std::vector<act::TestVerdict> vs{v};
  std::cout << act::emit_report(vs, act::ReportFormat::Json) << "\n";
  if (!a.plot.empty() && v.plot) write_text(a.plot, v.plot->to_csv());
  return act::exit_code(vs);
}

struct DiagnoseArgs {
  std::string left, right, both, display;
};

int cmd_diagnose(const DiagnoseArgs& a) {
  const auto d = act::diagnose(act::parse_bump_response(a.left), act::parse_bump_response(a.right),
                               act::parse_bump_response(a.both), act::parse_display_status(a.display));
  std::cout << act::to_string(d.diagnosis) << "\n" << d.row << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera-based hardware-in-the-loop test oracles"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Execute a test plan");
  run_cmd->add_option("--plan", run.plan, "Plan JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Seed (overrides ACT_SEED and the plan)");
  run_cmd->add_option("--out", run.out, "JSON report path (default: stdout)");
  run_cmd->add_option("--junit", run.junit, "JUnit XML report path");
  run_cmd->add_option("--plots", run.plots, "Directory for per-case CSV plot series");
  run_cmd->add_flag("--no-hooks", run.no_hooks, "Skip build/flash hooks");

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Dump a simulated scenario as fixtures");
  sim_cmd->add_option("--scenario", sim.scenario)->required()->check(CLI::IsMember({"led", "wheel", "display", "bump"}));
  sim_cmd->add_option("--fault", sim.fault, "Fault spec, e.g. led_wrong_period:2");
  sim_cmd->add_option("--out", sim.out)->required();
  sim_cmd->add_option("--config", sim.config, "SimConfig JSON")->check(CLI::ExistingFile);
  sim_cmd->add_option("--duration", sim.duration, "Seconds of frames (led, wheel)");
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--rpm", sim.rpm, "Wheel speed (wheel)");
  sim_cmd->add_option("--period", sim.period, "LED period in seconds (led)");
  sim_cmd->add_option("--pitch", sim.pitch, "Tilt (display)");
  sim_cmd->add_option("--roll", sim.roll, "Tilt (display)");
  sim_cmd->add_flag("--no-frames", sim.no_frames, "Write only the CSV series (led, wheel)");

  AnalyzeArgs an;
  auto* an_cmd = app.add_subcommand("analyze", "Run one oracle over recorded input");
  an_cmd->add_option("kind", an.kind)->required()->check(CLI::IsMember({"blink", "rpm", "imu", "bump"}));
  an_cmd->add_option("--input", an.input, "Frame directory, CSV, snapshot PPM or bump record")
      ->required()
      ->check(CLI::ExistingPath);
  an_cmd->add_option("--plot", an.plot, "Write the plot series CSV here");
  an_cmd->add_option("--expected-period", an.expected_period, "LED period (s)");
  an_cmd->add_option("--threshold", an.blink.active_pixel_threshold, "Active-pixel ON threshold");
  an_cmd->add_option("--tolerance", an.blink.tolerance_fraction, "Blink period tolerance (fraction)");
  an_cmd->add_option("--min-blinks", an.blink.min_blinks);
  an_cmd->add_option("--expected-rpm", an.expected_rpm);
  an_cmd->add_option("--duty", an.duty, "Duty cycle looked up in the calibration table");
  an_cmd->add_option("--window", an.stability.window, "Stability window (s)");
  an_cmd->add_option("--adopt-window", an.stability.adopt_window, "Minimum observation (s)");
  an_cmd->add_option("--cv-max", an.stability.cv_max);
  an_cmd->add_option("--pitch", an.pitch, "Actual pitch (deg)");
  an_cmd->add_option("--roll", an.roll, "Actual roll (deg)");
  an_cmd->add_option("--angle-tolerance", an.imu.tolerance, "IMU tolerance (deg)");
  an_cmd->add_option("--min-confidence", an.imu.min_confidence);

  DiagnoseArgs dg;
  auto* dg_cmd = app.add_subcommand("diagnose-bump", "Look up the bump fault matrix");
  dg_cmd->add_option("--left", dg.left)->required();
  dg_cmd->add_option("--right", dg.right)->required();
  dg_cmd->add_option("--both", dg.both)->required();
  dg_cmd->add_option("--display", dg.display)->required();

  std::string atlas_out;
  auto* atlas_cmd = app.add_subcommand("atlas", "Write the built-in glyph atlas (glyphs.ppm, glyphs.json)");
  atlas_cmd->add_option("--out", atlas_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageExit;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*sim_cmd) return cmd_simulate(sim);
    if (*an_cmd) return cmd_analyze(an);
    if (*dg_cmd) return cmd_diagnose(dg);
    if (*atlas_cmd) {
      fs::create_directories(atlas_out);
      act::GlyphAtlas::builtin().save(fs::path(atlas_out) / "glyphs.ppm", fs::path(atlas_out) / "glyphs.json");
      return 0;
    }
  } catch (const act::Error& e) {
    std::cerr << "act: " << e.what() << "\n";
    return kUsageExit;
  } catch (const std::exception& e) {
    std::cerr << "act: " << e.what() << "\n";
    return kUsageExit;
  }
  return kUsageExit;
}
