#include "bayesmi/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bayesmi {
namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274;  // ln(sqrt(2*pi))

std::vector<std::vector<double>> flatten_all(
    const std::vector<MetricVector>& vectors) {
  std::vector<std::vector<double>> flat;
  flat.reserve(vectors.size());
  for (const auto& v : vectors) flat.push_back(v.flatten());
  return flat;
}

// Two-pass sample mean and variance (denominator n-1) per metric.
void group_stats(const std::vector<std::vector<double>>& vectors,
                 std::vector<double>& mean, std::vector<double>& var) {
  const std::size_t n = vectors.size();
  const std::size_t k = vectors.front().size();
  mean.assign(k, 0.0);
  var.assign(k, 0.0);
  for (const auto& v : vectors) {
    if (v.size() != k) {
      throw std::invalid_argument("calibrate: metric vectors differ in length");
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (!std::isfinite(v[i])) {
        throw std::invalid_argument("calibrate: non-finite metric value");
      }
      mean[i] += v[i];
    }
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < k; ++i) {
      const double diff = v[i] - mean[i];
      var[i] += diff * diff;
    }
  }
  for (double& s : var) s /= static_cast<double>(n - 1);
}

}  // namespace

void LikelihoodParams::validate() const {
  if (mu_member.size() != sigma.size() || mu_nonmember.size() != sigma.size()) {
    throw std::invalid_argument("LikelihoodParams: array length mismatch");
  }
  for (double s : sigma) {
    if (!(s >= kSigmaFloor)) {
      throw std::invalid_argument("LikelihoodParams: sigma below floor");
    }
  }
}

void Prior::validate() const {
  if (!(p_member > 0.0 && p_member < 1.0)) {
    throw std::invalid_argument("Prior: p_member must lie in (0,1)");
  }
}

LikelihoodParams calibrate(
    const std::vector<std::vector<double>>& member_vectors,
    const std::vector<std::vector<double>>& nonmember_vectors) {
  if (member_vectors.size() < 2 || nonmember_vectors.size() < 2) {
    throw std::invalid_argument(
        "calibrate: each group needs at least two metric vectors");
  }
  const std::size_t k = member_vectors.front().size();
  if (nonmember_vectors.front().size() != k) {
    throw std::invalid_argument("calibrate: group metric lengths differ");
  }

  LikelihoodParams params;
  std::vector<double> var_member, var_nonmember;
  group_stats(member_vectors, params.mu_member, var_member);
  group_stats(nonmember_vectors, params.mu_nonmember, var_nonmember);

  const double n1 = static_cast<double>(member_vectors.size());
  const double n0 = static_cast<double>(nonmember_vectors.size());
  params.sigma.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double pooled =
        ((n1 - 1.0) * var_member[i] + (n0 - 1.0) * var_nonmember[i]) /
        (n1 + n0 - 2.0);
    params.sigma[i] = std::max(std::sqrt(pooled), kSigmaFloor);
  }
  params.validate();
  return params;
}

LikelihoodParams calibrate(const std::vector<MetricVector>& member_vectors,
                           const std::vector<MetricVector>& nonmember_vectors) {
  return calibrate(flatten_all(member_vectors), flatten_all(nonmember_vectors));
}

LikelihoodParams default_manual_params(std::size_t n_metrics) {
  if (n_metrics < 1) {
    throw std::invalid_argument("default_manual_params: n_metrics must be positive");
  }
  LikelihoodParams params;
  params.mu_member.assign(n_metrics, 0.0);
  params.mu_nonmember.assign(n_metrics, 1.0);
  params.sigma.assign(n_metrics, 1.0);
  return params;
}

double log_likelihood(const std::vector<double>& z,
                      const std::vector<double>& mu,
                      const std::vector<double>& sigma) {
  if (z.size() != mu.size() || z.size() != sigma.size()) {
    throw std::invalid_argument("log_likelihood: length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i])) {
      throw std::invalid_argument("log_likelihood: non-finite metric value");
    }
    if (!(sigma[i] > 0.0)) {
      throw std::invalid_argument("log_likelihood: sigma must be positive");
    }
    const double standardized = (z[i] - mu[i]) / sigma[i];
    total += -std::log(sigma[i]) - kLogSqrt2Pi - 0.5 * standardized * standardized;
  }
  return total;
}

PosteriorResult posterior(const std::vector<double>& z,
                          const LikelihoodParams& params, const Prior& prior) {
  params.validate();
  prior.validate();
  if (z.size() != params.size()) {
    throw std::invalid_argument("posterior: metric length mismatch");
  }
  PosteriorResult result;
  result.prior_member = prior.p_member;
  result.log_lik_member = log_likelihood(z, params.mu_member, params.sigma);
  result.log_lik_nonmember = log_likelihood(z, params.mu_nonmember, params.sigma);
  const double a = result.log_lik_member + std::log(prior.p_member);
  const double b = result.log_lik_nonmember + std::log(1.0 - prior.p_member);
  // 1 / (1 + exp(b - a)); exp may overflow to +inf, which still yields 0.
  result.posterior_member = 1.0 / (1.0 + std::exp(b - a));
  return result;
}

PosteriorResult posterior(const MetricVector& z, const LikelihoodParams& params,
                          const Prior& prior) {
  return posterior(z.flatten(), params, prior);
}

PosteriorResult posterior_from_model(const MlpParams& model,
                                     const Dataset& dataset,
                                     const LikelihoodParams& lik,
                                     const Prior& prior,
                                     const TrainConfig& config) {
  const MetricVector z = extract_metric_vector(model, dataset, config);
  PosteriorResult result = posterior(z, lik, prior);
  result.metrics = z.flatten();
  return result;
}

}  // namespace bayesmi
