// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "act/error.hpp"
#include "act/harness.hpp"
#include "act/report.hpp"

namespace {

namespace fs = std::filesystem;
using act::Outcome;
using act::TestCase;

TestCase blink_case(double period) {
  TestCase c;
  c.id = "led";
  act::BlinkCase b;
  b.expected_period_s = period;
  c.params = b;
  return c;
}

TestCase bump_case() {
  TestCase c;
  c.id = "bump";
  c.params = act::BumpCase{};
  return c;
}

TEST(RunCase, BlinkPassesWithinThirtySeconds) {
  act::SimDevice dev({}, act::FaultSpec::none());
  const auto v = act::run_case(blink_case(1.0), dev);
  EXPECT_EQ(v.outcome, Outcome::Pass);
  EXPECT_EQ(v.attempts, 1);
  EXPECT_LE(v.duration_s, 30.0);
  EXPECT_TRUE(v.plot);
}

TEST(RunCase, WrongPeriodFailsWithFullDeviation) {
  act::SimDevice dev({}, act::FaultSpec::led_wrong_period(2.0));
  const auto v = act::run_case(blink_case(1.0), dev);
  EXPECT_EQ(v.outcome, Outcome::Fail);
  EXPECT_NEAR(v.measured["deviation"].get<double>(), 1.0, 0.01);
}

TEST(RunCase, SwappedLeftMappingIsDiagnosed) {
  act::SimDevice dev({}, act::FaultSpec::bump_swapped(act::FaultSide::Left));
  const auto v = act::run_case(bump_case(), dev);
  EXPECT_EQ(v.outcome, Outcome::Fail);
  EXPECT_EQ(v.measured["diagnosis"], "LeftMappingError");
}

TEST(RunCase, RetriesExtendTheWindowMonotonically) {
  act::SimConfig cfg;
  cfg.led.period = 4.0;
  act::SimDevice dev(cfg, act::FaultSpec::none());
  auto c = blink_case(4.0);
  c.retries = 2;
  const auto v = act::run_case(c, dev);
  EXPECT_EQ(v.outcome, Outcome::Inconclusive);
  EXPECT_EQ(v.attempts, 3);
  EXPECT_NEAR(v.measured["window_s"].get<double>(), 30.0 * 1.5 * 1.5, 1e-9);
  EXPECT_GT(v.duration_s, 30.0 + 45.0);
  ASSERT_GE(v.reason_log.size(), 3u);
  EXPECT_NE(v.reason_log[0].find("attempt 1 (window 30.000 s)"), std::string::npos);
  EXPECT_NE(v.reason_log[1].find("attempt 2 (window 45.000 s)"), std::string::npos);

  double prev = 0;
  for (int a = 1; a <= 5; ++a) {
    const double w = act::attempt_window(30.0, 1.5, a);
    EXPECT_GT(w, prev);
    prev = w;
  }
}

TEST(RunCase, SlowLedPassesAfterOneExtension) {
  act::SimConfig cfg;
  cfg.led.period = 2.0;
  act::SimDevice dev(cfg, act::FaultSpec::none());
  const auto v = act::run_case(blink_case(2.0), dev);
  EXPECT_EQ(v.outcome, Outcome::Pass);
  EXPECT_EQ(v.attempts, 2);
}

TEST(RunCase, NoRetriesMeansOneAttempt) {
  act::SimConfig cfg;
  cfg.led.period = 4.0;
  act::SimDevice dev(cfg, act::FaultSpec::none());
  auto c = blink_case(4.0);
  c.retries = 0;
  EXPECT_EQ(act::run_case(c, dev).attempts, 1);
}

TEST(RunCase, DeviceFailureIsAnError) {
  act::ReplayDevice dev(act::ExternalDeviceSpec{});
  const auto v = act::run_case(bump_case(), dev);
  EXPECT_EQ(v.outcome, Outcome::Error);
  EXPECT_FALSE(v.reason_log.empty());
  EXPECT_EQ(v.attempts, 1);
}

TEST(RunCase, RpmFromDutyCycle) {
  TestCase c;
  c.id = "motor";
  act::RpmCase r;
  r.duty_cycle = 0.08;
  c.params = r;
  act::SimDevice dev({}, act::FaultSpec::none());
  const auto v = act::run_case(c, dev);
  EXPECT_EQ(v.outcome, Outcome::Pass);
  EXPECT_NEAR(v.measured["rpm_estimate"].get<double>(), 60.0, 1.8);
}

act::TestPlan small_plan() {
  act::TestPlan p;
  p.plan_id = "small";
  p.cases = {bump_case()};
  return p;
}

TEST(Hooks, FailureMakesEveryCaseAnError) {
  auto p = small_plan();
  p.cases.push_back(blink_case(1.0));
  p.build_hook = "echo compiling; exit 3";
  const auto vs = act::run_plan(p);
  ASSERT_EQ(vs.size(), 2u);
  for (const auto& v : vs) {
    EXPECT_EQ(v.outcome, Outcome::Error);
    bool saw_output = false;
    for (const auto& l : v.reason_log) saw_output = saw_output || l.find("compiling") != std::string::npos;
    EXPECT_TRUE(saw_output);
  }
  EXPECT_EQ(act::exit_code(vs), 2);
}

TEST(Hooks, OutputIsLoggedAndWorkdirHonoured) {
  auto p = small_plan();
  const fs::path dir = fs::temp_directory_path() / "act_hook_workdir";
  fs::create_directories(dir);
  p.workdir = dir;
  p.build_hook = "pwd";
  p.flash_hook = "echo flashed";
  const auto vs = act::run_plan(p);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].outcome, Outcome::Pass);
  std::string log;
  for (const auto& l : vs[0].reason_log) log += l + "\n";
  EXPECT_NE(log.find("act_hook_workdir"), std::string::npos);
  EXPECT_NE(log.find("flashed"), std::string::npos);
}

TEST(Seed, CliThenEnvironmentThenPlan) {
  auto p = small_plan();
  p.seed = 5;
  ::unsetenv("ACT_SEED");
  EXPECT_EQ(act::effective_seed(p, std::nullopt), 5u);
  ::setenv("ACT_SEED", "77", 1);
  EXPECT_EQ(act::effective_seed(p, std::nullopt), 77u);
  EXPECT_EQ(act::effective_seed(p, 9), 9u);
  ::setenv("ACT_SEED", "seven", 1);
  EXPECT_THROW((void)act::effective_seed(p, std::nullopt), act::Error);
  ::unsetenv("ACT_SEED");
}

TEST(RunPlan, SameSeedSameReport) {
  auto p = small_plan();
  TestCase imu;
  imu.id = "tilt";
  imu.params = act::ImuCase{10.0, 0.0, 2.0, {}};
  p.cases.push_back(imu);
  p.seed = 21;
  const auto a = act::emit_report(act::run_plan(p), act::ReportFormat::Json, p.plan_id);
  const auto b = act::emit_report(act::run_plan(p), act::ReportFormat::Json, p.plan_id);
  EXPECT_EQ(a, b);
  act::RunOptions other;
  other.seed = 22;
  EXPECT_NE(a, act::emit_report(act::run_plan(p, other), act::ReportFormat::Json, p.plan_id));
}

}  // namespace
