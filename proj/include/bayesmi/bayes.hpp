#pragma once

#include <vector>

#include "bayesmi/metrics.hpp"
#include "bayesmi/mlp.hpp"

namespace bayesmi {

// Pooled standard deviations are floored here so that a metric with zero
// within-group variance cannot produce an infinite log-likelihood.
inline constexpr double kSigmaFloor = 1e-6;

// Per-metric Gaussian likelihood model: z_i | M ~ N(mu_{i,M}, sigma_i^2)
// with a shared (pooled) sigma per metric.
struct LikelihoodParams {
  std::vector<double> mu_member;
  std::vector<double> mu_nonmember;
  std::vector<double> sigma;

  std::size_t size() const { return sigma.size(); }
  void validate() const;
};

struct Prior {
  double p_member = 0.5;

  void validate() const;
};

struct PosteriorResult {
  double prior_member = 0.5;
  double log_lik_member = 0.0;
  double log_lik_nonmember = 0.0;
  double posterior_member = 0.0;
  // Metric vector that was scored; filled by posterior_from_model.
  std::vector<double> metrics;
};

// Group means plus the pooled standard deviation
//   sigma_i = sqrt(((n1-1) s1_i^2 + (n0-1) s0_i^2) / (n1 + n0 - 2))
// from sample variances, floored at kSigmaFloor. Each group needs at least
// two vectors.
LikelihoodParams calibrate(const std::vector<std::vector<double>>& member_vectors,
                           const std::vector<std::vector<double>>& nonmember_vectors);
LikelihoodParams calibrate(const std::vector<MetricVector>& member_vectors,
                           const std::vector<MetricVector>& nonmember_vectors);

// Fallback when no calibration data exists: member means 0, non-member
// means 1, unit sigmas (non-member shifted by one standard deviation).
LikelihoodParams default_manual_params(std::size_t n_metrics);

// Sum over metrics of the Gaussian log-density
//   -ln(sigma_i sqrt(2 pi)) - (z_i - mu_i)^2 / (2 sigma_i^2).
double log_likelihood(const std::vector<double>& z,
                      const std::vector<double>& mu,
                      const std::vector<double>& sigma);

// Two-hypothesis posterior computed entirely in log space; raw density
// products over 23 metrics underflow doubles long before the posterior
// becomes meaningless.
PosteriorResult posterior(const std::vector<double>& z,
                          const LikelihoodParams& params, const Prior& prior);
PosteriorResult posterior(const MetricVector& z, const LikelihoodParams& params,
                          const Prior& prior);

// Full pipeline for one candidate dataset: extract metrics, then score.
PosteriorResult posterior_from_model(const MlpParams& model,
                                     const Dataset& dataset,
                                     const LikelihoodParams& lik,
                                     const Prior& prior,
                                     const TrainConfig& config);

}  // namespace bayesmi
