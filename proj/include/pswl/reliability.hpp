#pragma once

#include <cmath>
#include <span>

namespace pswl {

// Log-logistic failure model over raw P/E count.
struct FailureModelParams {
  double mu = std::log(3000.0);  // log of the median lifetime
  double sigma = 0.1;            // shape, > 0
  void validate() const;
};

// Weights of the effective-lifetime metric L(t) = k*t + k_p*P(t).
struct LifetimeParams {
  double k = 1.0;
  double k_p = 1000.0;
  void validate() const;
};

// Cumulative failure probability at wear t (> 0). Throws DomainError for t <= 0.
double failure_probability(double t, const FailureModelParams& p);

// Like failure_probability but returns 0 for t <= 0 (the t -> 0 limit).
double failure_probability_or_zero(double t, const FailureModelParams& p);

double effective_lifetime(double t, const LifetimeParams& lp, const FailureModelParams& fp);

// 1 - prod(1 - p_i).
double array_failure_probability(std::span<const double> probs);

// Inverse of failure_probability. Throws DomainError unless target_p in (0, 1).
double initial_wear_for_probability(double target_p, const FailureModelParams& p);

}  // namespace pswl
