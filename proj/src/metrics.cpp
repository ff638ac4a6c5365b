#include "bayesmi/metrics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "bayesmi/format.hpp"

namespace bayesmi {

std::vector<double> MetricVector::flatten() const {
  std::vector<double> flat;
  flat.reserve(size());
  flat.push_back(prediction_error);
  flat.push_back(mean_entropy);
  flat.push_back(perturbation);
  flat.insert(flat.end(), feature_means.begin(), feature_means.end());
  flat.insert(flat.end(), feature_variances.begin(), feature_variances.end());
  return flat;
}

void MetricVector::validate() const {
  const double ln2 = std::numbers::ln2;
  if (!(prediction_error >= 0.0 && prediction_error <= 1.0)) {
    throw std::logic_error("MetricVector: prediction_error out of [0,1]");
  }
  if (!(mean_entropy >= 0.0 && mean_entropy <= ln2 + 1e-12)) {
    throw std::logic_error("MetricVector: mean_entropy out of [0, ln 2]");
  }
  if (!(perturbation >= 0.0) || !std::isfinite(perturbation)) {
    throw std::logic_error("MetricVector: perturbation must be non-negative");
  }
  if (feature_means.size() != feature_variances.size()) {
    throw std::logic_error("MetricVector: means/variances length mismatch");
  }
  for (double m : feature_means) {
    if (!std::isfinite(m)) throw std::logic_error("MetricVector: non-finite mean");
  }
  for (double v : feature_variances) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::logic_error("MetricVector: variance must be non-negative");
    }
  }
}

double prediction_error(const Matrix& probs, const std::vector<int>& labels) {
  if (probs.rows() == 0) {
    throw std::invalid_argument("prediction_error: empty input");
  }
  if (probs.rows() != labels.size() || probs.cols() != kNumClasses) {
    throw std::invalid_argument("prediction_error: shape mismatch");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    const int predicted = probs(i, 0) >= probs(i, 1) ? 0 : 1;
    if (predicted == labels[i]) ++correct;
  }
  return 1.0 - static_cast<double>(correct) / static_cast<double>(probs.rows());
}

double mean_entropy(const Matrix& probs) {
  if (probs.rows() == 0) {
    throw std::invalid_argument("mean_entropy: empty input");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    for (std::size_t c = 0; c < probs.cols(); ++c) {
      const double p = probs(i, c);
      if (p > 0.0) total -= p * std::log(p);
    }
  }
  return total / static_cast<double>(probs.rows());
}

double perturbation_magnitude(const MlpParams& params, const Dataset& dataset,
                              const TrainConfig& config) {
  return weight_l2_distance(params, fine_tune(params, dataset, config));
}

std::pair<std::vector<double>, std::vector<double>> dataset_statistics(
    const Matrix& features) {
  if (features.rows() == 0) {
    throw std::invalid_argument("dataset_statistics: empty matrix");
  }
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> means(d, 0.0);
  std::vector<double> variances(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += features(i, j);
    means[j] = sum * inv_n;
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = features(i, j) - means[j];
      sq += diff * diff;
    }
    variances[j] = sq * inv_n;
  }
  return {std::move(means), std::move(variances)};
}

MetricVector extract_metric_vector(const MlpParams& params,
                                   const Dataset& dataset,
                                   const TrainConfig& config) {
  const Matrix probs = forward(params, dataset.features);
  MetricVector z;
  z.prediction_error = prediction_error(probs, dataset.labels);
  z.mean_entropy = mean_entropy(probs);
  z.perturbation = perturbation_magnitude(params, dataset, config);
  std::tie(z.feature_means, z.feature_variances) =
      dataset_statistics(dataset.features);
  z.validate();
  return z;
}

std::string metric_csv_header(std::size_t n_features) {
  std::ostringstream out;
  out << "pred_error,entropy,pert";
  for (std::size_t j = 1; j <= n_features; ++j) out << ",mean_f" << j;
  for (std::size_t j = 1; j <= n_features; ++j) out << ",var_f" << j;
  return out.str();
}

std::string metric_csv_row(const std::vector<double>& flat) {
  std::ostringstream out;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(flat[i]);
  }
  return out.str();
}

}  // namespace bayesmi
