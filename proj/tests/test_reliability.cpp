#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pswl/errors.hpp"
#include "pswl/reliability.hpp"

using namespace pswl;

namespace {

const FailureModelParams kDefault{std::log(3000.0), 0.1};

}  // namespace

TEST(FailureProbability, SymmetryPointIsHalf) {
  EXPECT_DOUBLE_EQ(failure_probability(std::exp(kDefault.mu), kDefault), 0.5);
}

TEST(FailureProbability, OneSigmaAboveMedian) {
  const double t = 3000.0 * std::exp(0.1);
  const double want = oracle::failure_probability(t, kDefault.mu, kDefault.sigma);
  EXPECT_NEAR(want, 0.73106, 1e-5);
  EXPECT_TRUE(oracle::close_rel(failure_probability(t, kDefault), want));
}

TEST(FailureProbability, DeepLowerTail) {
  const double p = failure_probability(1.0, kDefault);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1e-30);
}

TEST(FailureProbability, RejectsNonPositiveWear) {
  EXPECT_THROW(failure_probability(0.0, kDefault), DomainError);
  EXPECT_THROW(failure_probability(-1.0, kDefault), DomainError);
  EXPECT_EQ(failure_probability_or_zero(0.0, kDefault), 0.0);
}

TEST(EffectiveLifetime, NoPenaltyIsRawWear) {
  const LifetimeParams lp{1.0, 0.0};
  for (double t : {0.0, 1.0, 1234.5, 3000.0}) EXPECT_EQ(effective_lifetime(t, lp, kDefault), t);
}

TEST(EffectiveLifetime, MedianWithPenalty) {
  const LifetimeParams lp{1.0, 1000.0};
  const double want = oracle::effective_lifetime(3000.0, 1.0, 1000.0, kDefault.mu, kDefault.sigma);
  EXPECT_NEAR(want, 3500.0, 1e-9);
  EXPECT_TRUE(oracle::close_rel(effective_lifetime(3000.0, lp, kDefault), want));
  EXPECT_EQ(effective_lifetime(0.0, lp, kDefault), 0.0);
}

TEST(ArrayFailureProbability, Examples) {
  EXPECT_EQ(array_failure_probability(std::vector<double>{0, 0, 0}), 0.0);
  EXPECT_TRUE(oracle::close_rel(array_failure_probability(std::vector<double>{0.5, 0.5}),
                                oracle::array_failure_probability({0.5, 0.5})));
  EXPECT_DOUBLE_EQ(array_failure_probability(std::vector<double>{0.5, 0.5}), 0.75);
  EXPECT_EQ(array_failure_probability(std::vector<double>{1.0, 0.0}), 1.0);
}

TEST(InitialWear, InverseExamples) {
  EXPECT_TRUE(oracle::close_rel(initial_wear_for_probability(0.5, kDefault), 3000.0));
  const double t = initial_wear_for_probability(1e-4, kDefault);
  EXPECT_NEAR(t, 1194.3, 0.1);
  EXPECT_TRUE(oracle::close_rel(t, oracle::inverse_failure_probability(1e-4, kDefault.mu, kDefault.sigma), 1e-9));
  for (double p : {0.01, 0.1, 0.9})
    EXPECT_TRUE(oracle::close_rel(failure_probability(initial_wear_for_probability(p, kDefault), kDefault), p));
}

TEST(InitialWear, RejectsOutOfRange) {
  for (double p : {0.0, 1.0, -0.1, 1.5})
    EXPECT_THROW(initial_wear_for_probability(p, kDefault), DomainError);
}

TEST(ReliabilityProperty, MonotoneBoundedAndInvertible) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> mu_d(std::log(100.0), std::log(100000.0));
  std::uniform_real_distribution<double> sigma_d(0.02, 1.0);
  // Standardised log-wear; beyond about 30 sigma 1 - P is not representable.
  std::uniform_real_distribution<double> z_d(-30.0, 25.0);
  std::uniform_real_distribution<double> dz_d(0.01, 5.0);
  std::uniform_real_distribution<double> p_d(1e-6, 1 - 1e-6);
  std::uniform_real_distribution<double> kp_d(0.0, 1e4);
  for (int i = 0; i < 10000; ++i) {
    const FailureModelParams fp{mu_d(rng), sigma_d(rng)};
    const LifetimeParams lp{1.0, kp_d(rng)};
    const double z1 = z_d(rng);
    const double t1 = std::exp(fp.mu + fp.sigma * z1);
    const double t2 = std::exp(fp.mu + fp.sigma * (z1 + dz_d(rng)));
    const double p1 = failure_probability(t1, fp), p2 = failure_probability(t2, fp);
    ASSERT_GT(p1, 0.0);
    ASSERT_LT(p2, 1.0);
    ASSERT_GT(p2, p1);
    ASSERT_TRUE(oracle::close_rel(p1, oracle::failure_probability(t1, fp.mu, fp.sigma)));
    ASSERT_GT(effective_lifetime(t2, lp, fp), effective_lifetime(t1, lp, fp));
    ASSERT_GE(effective_lifetime(t1, lp, fp), lp.k * t1);

    const double target = p_d(rng);
    const double t = initial_wear_for_probability(target, fp);
    ASSERT_TRUE(oracle::close_rel(failure_probability(t, fp), target, 1e-9)) << "draw " << i;

    const std::vector<double> probs{p1, p2, p_d(rng)};
    const double afp = array_failure_probability(probs);
    ASSERT_GE(afp, 0.0);
    ASSERT_LE(afp, 1.0);
    ASSERT_NEAR(afp, oracle::array_failure_probability(probs), 1e-12);
  }
}

TEST(ReliabilityProperty, ZeroPenaltyPreservesWearOrder) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t_d(1.0, 5000.0);
  const LifetimeParams lp{1.0, 0.0};
  for (int i = 0; i < 1000; ++i) {
    const double a = t_d(rng), b = t_d(rng);
    EXPECT_EQ(a < b, effective_lifetime(a, lp, kDefault) < effective_lifetime(b, lp, kDefault));
  }
}
