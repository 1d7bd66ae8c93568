#include "pswl/reliability.hpp"

#include "pswl/errors.hpp"

namespace pswl {

void FailureModelParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("reliability.sigma must be > 0");
  if (!std::isfinite(mu)) throw ConfigError("reliability.mu must be finite");
}

void LifetimeParams::validate() const {
  if (!(k > 0.0)) throw ConfigError("reliability.k must be > 0");
  if (!(k_p >= 0.0)) throw ConfigError("reliability.k_p must be >= 0");
}

double failure_probability(double t, const FailureModelParams& p) {
  if (!(t > 0.0)) throw DomainError("failure_probability needs t > 0");
  // z = (ln t - mu) / sigma; logistic(z) evaluated without overflowing exp.
  const double z = (std::log(t) - p.mu) / p.sigma;
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

double failure_probability_or_zero(double t, const FailureModelParams& p) {
  return t > 0.0 ? failure_probability(t, p) : 0.0;
}

double effective_lifetime(double t, const LifetimeParams& lp, const FailureModelParams& fp) {
  if (t < 0.0) throw DomainError("effective_lifetime needs t >= 0");
  return lp.k * t + lp.k_p * failure_probability_or_zero(t, fp);
}

double array_failure_probability(std::span<const double> probs) {
  // log1p keeps tiny probabilities from vanishing in the product.
  double log_survive = 0.0;
  for (double p : probs) {
    if (p >= 1.0) return 1.0;
    log_survive += std::log1p(-p);
  }
  return -std::expm1(log_survive);
}

double initial_wear_for_probability(double target_p, const FailureModelParams& p) {
  if (!(target_p > 0.0 && target_p < 1.0))
    throw DomainError("target probability must lie in (0, 1)");
  return std::exp(p.mu + p.sigma * std::log(target_p / (1.0 - target_p)));
}

}  // namespace pswl
