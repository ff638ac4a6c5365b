#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bayesmi/dataset.hpp"
#include "bayesmi/mlp.hpp"

namespace bayesmi {

// Behavioral fingerprint of one dataset under one trained model. Flattened
// layout, fixed everywhere downstream:
//   [0] prediction_error  [1] mean_entropy  [2] perturbation
//   [3 .. 2+d]   per-feature means
//   [3+d .. 2+2d] per-feature variances
struct MetricVector {
  double prediction_error = 0.0;
  double mean_entropy = 0.0;
  double perturbation = 0.0;
  std::vector<double> feature_means;
  std::vector<double> feature_variances;

  std::size_t size() const { return 3 + feature_means.size() + feature_variances.size(); }
  std::vector<double> flatten() const;

  // Range checks: error in [0,1], entropy in [0, ln 2], perturbation and
  // variances non-negative, everything finite.
  void validate() const;
};

// 1 - accuracy under argmax prediction; probability ties go to class 0.
double prediction_error(const Matrix& probs, const std::vector<int>& labels);

// Mean Shannon entropy of the predicted distributions, natural log,
// 0*ln(0) taken as 0.
double mean_entropy(const Matrix& probs);

// L2 weight displacement caused by a small fine-tuning budget on the
// candidate dataset; the input parameters are untouched.
double perturbation_magnitude(const MlpParams& params, const Dataset& dataset,
                              const TrainConfig& config);

// Per-column mean and population variance (denominator n).
std::pair<std::vector<double>, std::vector<double>> dataset_statistics(
    const Matrix& features);

MetricVector extract_metric_vector(const MlpParams& params,
                                   const Dataset& dataset,
                                   const TrainConfig& config);

// CSV header for d features: pred_error,entropy,pert,mean_f1..,var_f1..
std::string metric_csv_header(std::size_t n_features);
std::string metric_csv_row(const std::vector<double>& flat);

}  // namespace bayesmi
