// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "act/blink.hpp"
#include "act/error.hpp"

namespace {

using act::BlinkEstimate;
using act::BlinkPolicy;
using act::Outcome;

struct Wave {
  double period;
  double phase;
  double duty = 0.5;
  double fps = 30.0;

  bool on(std::size_t k) const {
    const double t = static_cast<double>(k) / fps + phase;
    const double r = std::fmod(t, period);
    return r < duty * period;
  }
};

BlinkEstimate feed(const Wave& w, std::size_t frames, const BlinkPolicy& p = {}) {
  BlinkEstimate st(w.period);
  for (std::size_t k = 0; k < frames; ++k) st = act::ingest(std::move(st), w.on(k) ? 40 : 1, k / w.fps, p);
  return st;
}

// Edge times straight from the square wave, no estimator state involved.
std::vector<double> oracle_edges(const Wave& w, std::size_t frames) {
  std::vector<double> edges;
  for (std::size_t k = 1; k < frames; ++k)
    if (w.on(k) && !w.on(k - 1)) edges.push_back(k / w.fps);
  return edges;
}

TEST(Blink, MatchesEdgeOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> per(0.3, 2.5), ph(0.0, 3.0), du(0.2, 0.8);
  for (int i = 0; i < 50; ++i) {
    const Wave w{per(rng), ph(rng), du(rng)};
    const std::size_t n = 1200;
    const auto st = feed(w, n);
    const auto edges = oracle_edges(w, n);
    ASSERT_EQ(st.rising_edges, edges.size());
    if (edges.size() >= 2) {
      ASSERT_TRUE(st.period_estimate);
      EXPECT_NEAR(*st.period_estimate, (edges.back() - edges.front()) / (edges.size() - 1), 1e-12);
      EXPECT_NEAR(*st.frequency_estimate, 1.0 / *st.period_estimate, 1e-12);
    }
  }
}

TEST(Blink, FirstFrameLevelIsNotAnEdge) {
  BlinkPolicy p;
  BlinkEstimate st(1.0);
  st = act::ingest(st, 50, 0.0, p);
  EXPECT_EQ(st.rising_edges, 0u);
  st = act::ingest(st, 0, 0.5, p);
  st = act::ingest(st, 50, 1.0, p);
  EXPECT_EQ(st.rising_edges, 1u);
  EXPECT_EQ(st.first_edge_t, 1.0);
  EXPECT_FALSE(st.period_estimate);
}

TEST(Blink, ThresholdIsInclusive) {
  BlinkPolicy p;
  BlinkEstimate st;
  st = act::ingest(st, 4, 0.0, p);
  st = act::ingest(st, 5, 0.1, p);
  EXPECT_EQ(st.rising_edges, 1u);
}

TEST(Blink, RejectsNonMonotonicTimestamps) {
  BlinkPolicy p;
  auto st = act::ingest(BlinkEstimate{}, 0, 1.0, p);
  try {
    (void)act::ingest(st, 0, 1.0, p);
    FAIL();
  } catch (const act::Error& e) {
    EXPECT_EQ(e.code(), act::ErrorCode::NonMonotonicTimestamp);
  }
}

TEST(Blink, DutyCycleDoesNotMoveTheEstimate) {
  const auto a = feed({1.0, 0.3, 0.1}, 900);
  const auto b = feed({1.0, 0.3, 0.9}, 900);
  EXPECT_EQ(a.rising_edges, b.rising_edges);
  EXPECT_NEAR(*a.period_estimate, *b.period_estimate, 1.0 / 30.0 / (a.rising_edges - 1) + 1e-12);
}

// Edge quantisation is at most one frame, spread over (edges - 1) periods.
TEST(Blink, ConvergesWithinHalfPercentFromTwentyOneEdges) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> per(0.5, 2.0), ph(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Wave w{per(rng), ph(rng)};
    BlinkEstimate st(w.period);
    BlinkPolicy p;
    for (std::size_t k = 0; k < 30 * 60; ++k) {
      st = act::ingest(std::move(st), w.on(k) ? 40 : 0, k / w.fps, p);
      if (st.rising_edges >= 21) {
        ASSERT_LE(std::fabs(*st.period_estimate - w.period) / w.period, 0.005) << w.period << " " << w.phase;
      }
    }
  }
}

TEST(Blink, DeviationTraceRecordedWithExpectedPeriod) {
  const auto st = feed({0.5, 0.1}, 600);
  ASSERT_FALSE(st.deviation_trace.empty());
  for (std::size_t i = 1; i < st.deviation_trace.size(); ++i)
    EXPECT_GT(st.deviation_trace[i].first, st.deviation_trace[i - 1].first);
  EXPECT_TRUE(feed({0.5, 0.1}, 600).expected_period);
}

TEST(BlinkVerdict, PassFailInconclusive) {
  BlinkPolicy p;
  EXPECT_EQ(act::blink_verdict(feed({1.0, 0.25}, 30 * 30), 1.0, p).outcome, Outcome::Pass);
  EXPECT_EQ(act::blink_verdict(feed({1.0, 0.25}, 30 * 5), 1.0, p).outcome, Outcome::Inconclusive);

  Wave slow{2.0, 0.25};
  BlinkEstimate st(1.0);
  for (std::size_t k = 0; k < 30 * 50; ++k) st = act::ingest(std::move(st), slow.on(k) ? 40 : 0, k / 30.0, p);
  const auto v = act::blink_verdict(st, 1.0, p);
  EXPECT_EQ(v.outcome, Outcome::Fail);
  EXPECT_NEAR(v.measured["deviation"].get<double>(), 1.0, 0.01);
}

TEST(BlinkVerdict, StuckLedFailsAfterTwoExpectedPeriods) {
  BlinkPolicy p;
  BlinkEstimate st(1.0);
  for (std::size_t k = 0; k <= 30; ++k) st = act::ingest(std::move(st), 0, k / 30.0, p);
  EXPECT_EQ(act::blink_verdict(st, 1.0, p).outcome, Outcome::Inconclusive);
  for (std::size_t k = 31; k <= 60; ++k) st = act::ingest(std::move(st), 0, k / 30.0, p);
  const auto v = act::blink_verdict(st, 1.0, p);
  EXPECT_EQ(v.outcome, Outcome::Fail);
  EXPECT_FALSE(v.reason_log.empty());
}

TEST(BlinkPolicy, Validation) {
  BlinkPolicy p;
  EXPECT_NO_THROW(p.validate());
  p.tolerance_fraction = 0.0;
  EXPECT_THROW(p.validate(), act::Error);
  p = {};
  p.min_blinks = 1;
  EXPECT_THROW(p.validate(), act::Error);
}

}  // namespace
