#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "pswl/errors.hpp"
#include "pswl/wl_controller.hpp"

using namespace pswl;

TEST(LifetimeError, Examples) {
  EXPECT_EQ(lifetime_error(std::vector<double>{3500, 3500}, std::vector<double>{3500}), 0.0);
  EXPECT_EQ(lifetime_error(std::vector<double>{4000}, std::vector<double>{1000}), 3000.0);
  const std::vector<double> lo{100, 300}, ls{0, 100};
  const double want = oracle::mean(lo) - oracle::mean(ls);
  EXPECT_EQ(want, 150.0);
  EXPECT_TRUE(oracle::close_rel(lifetime_error(lo, ls), want));
}

TEST(LifetimeError, EmptyGroupThrows) {
  EXPECT_THROW(lifetime_error(std::vector<double>{}, std::vector<double>{1}), EmptyGroup);
  EXPECT_THROW(lifetime_error(std::vector<double>{1}, std::vector<double>{}), EmptyGroup);
}

TEST(PidStep, ZeroErrorGivesZero) {
  PidState s;
  for (int i = 0; i < 10; ++i) EXPECT_EQ(pid_step(s, 0.0), 0.0);
}

TEST(PidStep, PureProportional) {
  PidState s;
  s.gains = {2.0, 0.0, 0.0};
  EXPECT_EQ(pid_step(s, 5.0), 10.0);
}

TEST(PidStep, HandEvaluatedSecondStep) {
  PidState s;
  s.gains = {1.0, 1.0, 1.0};
  s.u_max = 1e9;
  pid_step(s, 2.0);
  const double u = pid_step(s, 3.0);
  const double want = oracle::pid_output({2.0, 3.0}, 1.0, 1.0, 1.0);
  EXPECT_EQ(want, 9.0);
  EXPECT_TRUE(oracle::close_rel(u, want));
}

TEST(PidStep, MatchesHistoryRecomputation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> e_d(-1.0, 1.0);
  PidState s;
  s.gains = {0.7, 0.05, 0.3};
  s.u_max = 1e9;
  std::vector<double> hist;
  for (int i = 0; i < 200; ++i) {
    hist.push_back(e_d(rng));
    const double u = pid_step(s, hist.back());
    ASSERT_TRUE(oracle::close_rel(u, oracle::pid_output(hist, 0.7, 0.05, 0.3), 1e-9)) << i;
  }
}

TEST(PidStep, AntiWindupClampsIntegral) {
  PidState s;
  s.gains = {0.0, 0.1, 0.0};
  s.u_max = 1.0;
  for (int i = 0; i < 1000; ++i) pid_step(s, 5.0);
  EXPECT_DOUBLE_EQ(s.integral, 10.0);
  EXPECT_DOUBLE_EQ(pid_step(s, 5.0), 1.0);
}

TEST(PidStep, ProportionalResponseIsMonotone) {
  for (double e = 0.0; e < 10.0; e += 0.5) {
    PidState a, b;
    a.gains = b.gains = {0.5, 0.0, 0.0};
    EXPECT_LT(pid_step(a, e), pid_step(b, e + 0.1));
  }
}

TEST(TuneGains, EqualLossLeavesGains) {
  TunerState t;
  t.has_prev = true;
  t.prev_loss = 0.3;
  PidState s;
  const PidGains before = s.gains;
  tune_gains(t, s, 0.3);
  EXPECT_EQ(s.gains.kp, before.kp);
  EXPECT_EQ(s.gains.ki, before.ki);
  EXPECT_EQ(s.gains.kd, before.kd);
}

TEST(TuneGains, HandEvaluatedStep) {
  TunerState t;
  t.alpha = 0.05;
  t.has_prev = true;
  t.prev_loss = 0.3;
  PidState s;
  s.gains.kp = 1.0;
  tune_gains(t, s, 0.2);
  const double want = oracle::tuned_gain(1.0, 0.05, 0.3, 0.2);
  EXPECT_NEAR(want, 0.95, 1e-12);
  EXPECT_TRUE(oracle::close_rel(s.gains.kp, want));
  EXPECT_EQ(t.coord_cursor, 1u);
  EXPECT_EQ(t.prev_loss, 0.2);
}

TEST(TuneGains, ClampsAtZero) {
  TunerState t;
  t.alpha = 0.05;
  t.has_prev = true;
  t.prev_loss = 0.3;
  PidState s;
  s.gains.kp = 0.01;
  tune_gains(t, s, 0.2);
  EXPECT_EQ(s.gains.kp, 0.0);
}

TEST(TuneGains, FirstCallOnlyRecordsLoss) {
  TunerState t;
  PidState s;
  const double kp = s.gains.kp;
  tune_gains(t, s, 0.4);
  EXPECT_TRUE(t.has_prev);
  EXPECT_EQ(t.prev_loss, 0.4);
  EXPECT_EQ(s.gains.kp, kp);
}

TEST(TuneGains, GainsStayNonNegative) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> loss_d(0.0, 1.0);
  TunerState t;
  t.alpha = 0.2;
  PidState s;
  for (int i = 0; i < 5000; ++i) {
    tune_gains(t, s, loss_d(rng));
    ASSERT_GE(s.gains.kp, 0.0);
    ASSERT_GE(s.gains.ki, 0.0);
    ASSERT_GE(s.gains.kd, 0.0);
  }
}

TEST(ShouldExit, Examples) {
  EXPECT_TRUE(should_exit(100, 100, 0.05));
  EXPECT_EQ(should_exit(100, 90, 0.05), oracle::should_exit(100, 90, 0.05));
  EXPECT_FALSE(should_exit(100, 90, 0.05));
  EXPECT_EQ(should_exit(100, 99, 0.05), oracle::should_exit(100, 99, 0.05));
  EXPECT_TRUE(should_exit(100, 99, 0.05));
  EXPECT_THROW(should_exit(0, 1, 0.05), DomainError);
}

TEST(ApproveMigration, StrictBelowBaseline) {
  EXPECT_TRUE(approve_migration(0.2, 0.5));
  EXPECT_FALSE(approve_migration(0.5, 0.5));
  for (double h : {0.0, 0.1, 3.0}) EXPECT_FALSE(approve_migration(h, 0.0));
}

TEST(WlController, ClosedLoopConvergesOnSyntheticPlant) {
  ControllerParams p;
  WlController c(p);
  double gap = 0.5;
  int samples = 0;
  uint64_t wl = 0, total = 0;
  while (c.phase() != ControllerPhase::Converged && samples < 200) {
    const double u = c.on_sample(gap, true, wl, total);
    // Approved migrations shrink the gap in proportion to the baseline.
    gap = std::max(0.0, gap - 0.5 * u);
    wl += uint64_t(100 * u);
    total += 1000;
    ++samples;
  }
  EXPECT_EQ(c.phase(), ControllerPhase::Converged);
  EXPECT_LT(samples, 100);
}

TEST(WlController, WaitsForScalingAndRestartBand) {
  ControllerParams p;
  WlController c(p);
  EXPECT_EQ(c.on_sample(0.5, false, 0, 0), 0.0);
  EXPECT_EQ(c.phase(), ControllerPhase::Idle);
  c.on_sample(p.lambda_restart * 0.9, true, 0, 0);
  EXPECT_EQ(c.phase(), ControllerPhase::Idle);
  EXPECT_GT(c.on_sample(0.5, true, 0, 0), 0.0);
  EXPECT_EQ(c.phase(), ControllerPhase::Chasing);
}

TEST(WlController, HysteresisPreventsOscillation) {
  ControllerParams p;
  WlController c(p);
  c.on_sample(0.5, true, 0, 0);
  c.on_sample(p.lambda * 0.5, true, 0, 0);
  ASSERT_EQ(c.phase(), ControllerPhase::Converged);
  // Gaps inside the band between lambda and lambda_restart keep it converged.
  for (double g : {p.lambda, 1.5 * p.lambda, p.lambda_restart}) {
    EXPECT_EQ(c.on_sample(g, true, 0, 0), 0.0);
    EXPECT_EQ(c.phase(), ControllerPhase::Converged);
  }
  c.on_sample(p.lambda_restart * 1.01, true, 0, 0);
  EXPECT_EQ(c.phase(), ControllerPhase::Chasing);
  EXPECT_EQ(c.chase_entries(), 2u);
}
