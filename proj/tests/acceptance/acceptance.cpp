// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one line per criterion, exit status 0 only if all hold.
//
//   act_acceptance [--act <path to act binary>]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "act/error.hpp"
#include "act/harness.hpp"
#include "act/report.hpp"
#include "hsv_oracle.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

// Tolerances.
constexpr double kBlinkTolerance = 0.005;
constexpr std::size_t kMinEdges = 20;
constexpr double kBandSettle = 30.0;
constexpr double kBandSettleSlow = 40.0;
constexpr double kWallPerRun = 5.0;
constexpr int kFlakeRuns = 100;
constexpr int kFlakeMinPass = 99;
constexpr double kImuTolerance = 4.5;
constexpr double kBumpWall = 1.0;
constexpr double kRpmAbs = 2.0;
constexpr double kRpmRel = 0.03;
constexpr double kStationaryMax = 0.5;
constexpr double kStableLo = 30.0;
constexpr double kStableHi = 60.0;
constexpr double kUnwrapTol = 1e-9;

struct Line {
  int id;
  std::string name;
  bool ok;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof(b), f, a);
  return b;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double random_phase(std::uint64_t seed, double period) {
  std::mt19937_64 rng(seed);
  return std::uniform_real_distribution<double>(0.0, period)(rng);
}

// Full blink stream from the simulator through mask + estimator.
act::BlinkEstimate blink_stream(double period, double phase, double seconds,
                                const std::function<void(const act::BlinkEstimate&)>& each = {}) {
  act::SimConfig cfg;
  cfg.led.period = period;
  cfg.led.phase = phase;
  act::RobotSim sim(cfg, act::FaultSpec::none());
  const act::BlinkPolicy policy;
  act::BlinkEstimate st(period);
  const auto range = cfg.led_range();
  for (std::size_t k = 0; k <= static_cast<std::size_t>(seconds * cfg.fps); ++k) {
    const auto f = sim.frame(k);
    st = act::ingest(std::move(st), act::count_active(f, range, cfg.led.roi), f.timestamp(), policy);
    if (each) each(st);
  }
  return st;
}

Line blink_accuracy() {
  double worst = 0.0, slowest = 0.0;
  int runs = 0;
  bool ok = true;
  for (double period : {0.5, 1.0, 2.0}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto t0 = Clock::now();
      std::size_t edges = 0;
      blink_stream(period, random_phase(seed, period), 2.0 * kMinEdges * period + 2.0, [&](const act::BlinkEstimate& s) {
        if (s.rising_edges >= kMinEdges && s.period_estimate) {
          const double dev = std::fabs(*s.period_estimate - period) / period;
          worst = std::max(worst, dev);
          ok = ok && dev <= kBlinkTolerance;
        }
        edges = s.rising_edges;
      });
      ok = ok && edges >= kMinEdges;
      slowest = std::max(slowest, seconds_since(t0));
      ++runs;
    }
  }
  ok = ok && slowest < kWallPerRun;
  return {1, "blink accuracy", ok,
          std::to_string(runs) + " runs (0.5/1.0/2.0 s, random phase), worst deviation after " +
              std::to_string(kMinEdges) + " edges " + fmt("%.4f%%", worst * 100) + " (limit 0.5%), slowest run " +
              fmt("%.2f s", slowest) + " wall (limit 5 s)"};
}

// Earliest elapsed time after which every trace point stays inside the band.
std::optional<double> band_entry(const act::BlinkEstimate& st) {
  std::optional<double> entry;
  for (const auto& [t, dev] : st.deviation_trace) {
    if (dev <= kBlinkTolerance) {
      if (!entry) entry = t;
    } else {
      entry.reset();
    }
  }
  return entry;
}

Line blink_convergence() {
  bool ok = true;
  double worst_fast = 0, best_slow = 1e9, worst_slow = 0, worst_mid = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::optional<double> e[3];
    const double periods[3] = {0.5, 1.0, 2.0};
    for (int i = 0; i < 3; ++i) {
      const auto st = blink_stream(periods[i], random_phase(100 + seed, periods[i]), 45.0);
      e[i] = band_entry(st);
      ok = ok && e[i].has_value();
    }
    if (!ok) break;
    ok = ok && *e[0] < *e[2] && *e[0] <= kBandSettle && *e[1] <= kBandSettle && *e[2] <= kBandSettleSlow;
    worst_fast = std::max(worst_fast, *e[0]);
    worst_mid = std::max(worst_mid, *e[1]);
    best_slow = std::min(best_slow, *e[2]);
    worst_slow = std::max(worst_slow, *e[2]);
  }
  return {2, "blink convergence shape", ok,
          "band entry: 0.5 s period <= " + fmt("%.2f s", worst_fast) + ", 1.0 s <= " + fmt("%.2f s", worst_mid) +
              ", 2.0 s in [" + fmt("%.2f", best_slow) + ", " + fmt("%.2f", worst_slow) +
              "] s; 0.5 s strictly earlier in all 10 phases"};
}

std::vector<act::Outcome> flake_schedule() {
  std::vector<act::Outcome> out(kFlakeRuns);
  act::TestCase c;
  c.id = "led";
  act::BlinkCase b;
  b.expected_period_s = 1.0;
  c.params = b;
  // Independent simulated devices, one per seed.
#pragma omp parallel for schedule(static)
  for (int i = 0; i < kFlakeRuns; ++i) {
    act::SimConfig cfg;
    cfg.seed = 1000 + static_cast<std::uint64_t>(i);
    cfg.led.phase = random_phase(cfg.seed, 1.0);
    act::SimDevice dev(cfg, act::FaultSpec::none());
    out[static_cast<std::size_t>(i)] = act::run_case(c, dev).outcome;
  }
  return out;
}

Line flakiness() {
  const auto a = flake_schedule();
  const auto b = flake_schedule();
  const auto passes = std::count(a.begin(), a.end(), act::Outcome::Pass);
  const bool ok = passes >= kFlakeMinPass && a == b;
  return {3, "flakiness bound", ok,
          std::to_string(passes) + "/" + std::to_string(kFlakeRuns) + " PASS (need >= " +
              std::to_string(kFlakeMinPass) + "), repeat schedule " + (a == b ? "identical" : "DIFFERS") + " (" +
              std::to_string(omp_get_max_threads()) + " threads)"};
}

Line imu_replay() {
  struct Row {
    const char* mp;
    double ap;
    const char* mr;
    double ar;
    act::Outcome check;
  } rows[] = {
      {"24.14", 25.00, "0.20", 0.00, act::Outcome::Pass},      {"0.0", 0.00, "26.07", 25.00, act::Outcome::Pass},
      {"10.73", 10.00, "0.36", 0.00, act::Outcome::Pass},      {"217.81", 20.00, "2.96", 0.0, act::Outcome::Fail},
      {"26.56", 0.0, "208.10", 20.00, act::Outcome::Fail},     {"44.05", 0.0, "-400.58", -20.00, act::Outcome::Fail},
  };
  act::ImuPolicy p;
  p.tolerance = kImuTolerance;
  int match = 0;
  for (const auto& r : rows) {
    const auto reading = act::parse_reading({{"Pitch", r.mp, 1.0, {}}, {"Roll", r.mr, 1.0, {}}}, p);
    if (act::imu_verdict(reading, r.ap, r.ar, p).outcome == r.check) ++match;
  }
  return {4, "IMU verdict replay", match == 6, std::to_string(match) + "/6 rows reproduce Passed/Failed at 4.5 deg"};
}

Line bump_matrix() {
  using R = act::BumpResponse;
  using D = act::DisplayStatus;
  using X = act::Diagnosis;
  struct Row {
    act::FaultSpec fault;
    R l, r, b;
    D d;
    X x;
  } rows[] = {
      {act::FaultSpec::bump_dead(act::FaultSide::Left), R::NoResponse, R::ReportsRight, R::ReportsRight,
       D::PartialOrMissing, X::LeftSensorHwFault},
      {act::FaultSpec::bump_dead(act::FaultSide::Right), R::ReportsLeft, R::NoResponse, R::ReportsLeft,
       D::PartialOrMissing, X::RightSensorHwFault},
      {act::FaultSpec::display_partial(0.5), R::ReportsLeft, R::ReportsRight, R::ReportsBoth, D::IncorrectOrMissing,
       X::DisplayHwFault},
      {act::FaultSpec::bump_dead(act::FaultSide::Both), R::NoResponse, R::NoResponse, R::NoResponse, D::NoOutput,
       X::BothSensorsFaulty},
      {act::FaultSpec::bump_swapped(act::FaultSide::Left), R::ReportsRight, R::ReportsRight, R::ReportsRight,
       D::Normal, X::LeftMappingError},
      {act::FaultSpec::bump_swapped(act::FaultSide::Right), R::ReportsLeft, R::ReportsLeft, R::ReportsLeft, D::Normal,
       X::RightMappingError},
      {act::FaultSpec::bump_swapped(act::FaultSide::Both), R::NoResponse, R::NoResponse, R::NoResponse, D::Normal,
       X::NoResponseAnyBump},
      {act::FaultSpec::none(), R::ReportsLeft, R::ReportsRight, R::ReportsBoth, D::Normal,
       X::SensorsOperatingCorrectly},
  };
  const auto t0 = Clock::now();
  int table = 0, e2e = 0;
  act::TestCase c;
  c.id = "bump";
  c.params = act::BumpCase{};
  for (const auto& row : rows) {
    if (act::diagnose(row.l, row.r, row.b, row.d).diagnosis == row.x) ++table;
    act::SimDevice dev({}, row.fault);
    const auto v = act::run_case(c, dev);
    if (v.measured.value("diagnosis", std::string()) == std::string(act::to_string(row.x))) ++e2e;
  }
  const double wall = seconds_since(t0);
  return {5, "bump diagnosis matrix", table == 8 && e2e == 8 && wall < kBumpWall,
          "diagnose " + std::to_string(table) + "/8, end-to-end " + std::to_string(e2e) + "/8, " +
              fmt("%.3f s", wall) + " wall (limit 1 s)"};
}

act::RpmTrace wheel_trace(double rpm, std::uint64_t seed, double seconds) {
  act::SimConfig cfg;
  cfg.seed = seed;
  cfg.wheel.rpm = rpm;
  act::RobotSim sim(cfg, act::FaultSpec::none());
  const auto mc = cfg.marker_config();
  act::RpmTrace tr;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(seconds * cfg.fps); ++k) {
    const auto f = sim.frame(k);
    if (const auto a = act::track_angle(f, mc)) tr = act::accumulate(std::move(tr), *a, f.timestamp());
  }
  return tr;
}

Line rpm_estimation() {
  bool ok = true;
  std::ostringstream d;
  const act::MotorCalibrationTable table;
  for (double duty : {0.05, 0.08, 0.10}) {
    const double nominal = table.expected_rpm(duty);
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto tr = wheel_trace(nominal, seed, 60.0);
      const double err = std::fabs(tr.rpm_estimate - nominal);
      worst = std::max(worst, err);
      ok = ok && err <= std::max(kRpmAbs, kRpmRel * nominal);
    }
    d << fmt("%g", nominal) << " RPM err<=" << fmt("%.3f", worst) << "; ";
  }
  double still = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) still = std::max(still, std::fabs(wheel_trace(0, seed, 60).rpm_estimate));
  ok = ok && still < kStationaryMax;
  double worst79 = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) worst79 = std::max(worst79, std::fabs(wheel_trace(79, seed, 60).rpm_estimate - 79));
  ok = ok && worst79 <= 2.0;
  d << "stationary " << fmt("%.3f", still) << " RPM; 79 RPM err " << fmt("%.3f", worst79);
  return {6, "RPM estimation", ok, d.str()};
}

Line stability_timing() {
  const act::StabilityPolicy policy;
  bool ok = true;
  double lo = 1e9, hi = 0;
  int runs = 0;
  for (double rpm : {33.0, 60.0, 79.0, 80.0}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto tr = wheel_trace(rpm, seed, 90.0);
      std::optional<double> first;
      for (const auto& s : tr.samples) {
        bool stable = false;
        try {
          stable = act::stability(tr, policy, s.t).stable;
        } catch (const act::Error&) {
        }
        if (stable) {
          first = s.t - *tr.origin_t;
          break;
        }
      }
      ++runs;
      if (!first) {
        ok = false;
        continue;
      }
      lo = std::min(lo, *first);
      hi = std::max(hi, *first);
      ok = ok && *first >= kStableLo && *first <= kStableHi;
    }
  }
  return {7, "stability detector timing", ok,
          std::to_string(runs) + " runs (33/60/79/80 RPM), first stable in [" + fmt("%.2f", lo) + ", " +
              fmt("%.2f", hi) + "] s (accepted [30, 60], never before 30)"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Line determinism(const std::string& act_bin) {
  const auto plan = act::parse_plan(nlohmann::json::parse(R"({
    "plan_id": "determinism", "seed": 99,
    "device": {"type": "sim", "config": {"pixel_noise": 3}},
    "cases": [
      {"id": "led", "kind": "blink", "expected_period_s": 1.0},
      {"id": "tilt", "kind": "imu", "pitch_deg": 10, "roll_deg": 0},
      {"id": "bump", "kind": "bump"},
      {"id": "motor", "kind": "rpm", "duty_cycle": 0.10}]})"));
  const auto a = act::emit_report(act::run_plan(plan), act::ReportFormat::Json, plan.plan_id);
  const auto b = act::emit_report(act::run_plan(plan), act::ReportFormat::Json, plan.plan_id);
  bool ok = a == b;
  std::string detail = std::string("in-process reports ") + (ok ? "identical" : "DIFFER") + " (" +
                       std::to_string(a.size()) + " bytes)";
  if (!act_bin.empty()) {
    const fs::path dir = fs::temp_directory_path() / "act_acceptance_det";
    fs::create_directories(dir);
    std::ofstream(dir / "plan.json") << act::plan_to_json(plan).dump(2);
    int rc[2];
    for (int i = 0; i < 2; ++i) {
      const std::string cmd = "\"" + act_bin + "\" run --plan \"" + (dir / "plan.json").string() + "\" --seed 99 --out \"" +
                              (dir / ("r" + std::to_string(i) + ".json")).string() + "\" 2>/dev/null";
      rc[i] = std::system(cmd.c_str());
    }
    const bool cli_same = rc[0] == rc[1] && slurp(dir / "r0.json") == slurp(dir / "r1.json") &&
                          !slurp(dir / "r0.json").empty();
    ok = ok && cli_same;
    detail += std::string("; `act run` twice ") + (cli_same ? "byte-identical" : "DIFFERS");
  }
  return {8, "determinism", ok, detail};
}

Line oracle_crosschecks() {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> d(0, 255);
  int hsv_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = static_cast<std::uint8_t>(d(rng)), g = static_cast<std::uint8_t>(d(rng)),
               b = static_cast<std::uint8_t>(d(rng));
    const auto got = act::rgb_to_hsv(r, g, b);
    const auto want = oracle::hsv(r, g, b);
    if (got == want) ++hsv_ok;
  }
  int walks_ok = 0;
  double worst = 0;
  std::uniform_real_distribution<double> step(-3.0, 3.0);
  for (int w = 0; w < 100; ++w) {
    double truth = 0.0;
    act::RpmTrace tr = act::accumulate({}, 0.0, 0.0);
    for (int i = 1; i <= 1000; ++i) {
      truth += step(rng);
      double wrapped = std::remainder(truth, 2 * kPi);
      if (wrapped <= -kPi) wrapped += 2 * kPi;
      tr = act::accumulate(std::move(tr), wrapped, i / 30.0);
    }
    const double err = std::fabs(tr.cumulative_rotations - truth / (2 * kPi));
    worst = std::max(worst, err);
    if (err <= kUnwrapTol) ++walks_ok;
  }
  return {9, "oracle cross-checks", hsv_ok == 1000 && walks_ok == 100,
          "rgb_to_hsv exact on " + std::to_string(hsv_ok) + "/1000 triples; rotation count within 1e-9 on " +
              std::to_string(walks_ok) + "/100 walks (worst " + fmt("%.2e", worst) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string act_bin;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--act") act_bin = argv[i + 1];

  const std::vector<std::function<Line()>> suite = {
      blink_accuracy, blink_convergence, flakiness,       imu_replay,         bump_matrix,
      rpm_estimation, stability_timing,  [&] { return determinism(act_bin); }, oracle_crosschecks,
  };
  int failed = 0;
  for (const auto& run : suite) {
    const auto t0 = Clock::now();
    Line l;
    try {
      l = run();
    } catch (const std::exception& e) {
      l = {0, "exception", false, e.what()};
    }
    failed += l.ok ? 0 : 1;
    std::printf("criterion %d %s  %s: %s [%.2f s]\n", l.id, l.ok ? "PASS" : "FAIL", l.name.c_str(), l.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria hold\n", static_cast<int>(suite.size()) - failed, suite.size());
  return failed == 0 ? 0 : 1;
}
