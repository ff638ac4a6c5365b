#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bayesmi/dataset.hpp"
#include "bayesmi/matrix.hpp"

namespace bayesmi {

inline constexpr std::size_t kHiddenUnits = 16;
inline constexpr std::size_t kNumClasses = 2;

// Weights and biases of the fixed d -> 16 -> 2 classifier (ReLU hidden
// layer, softmax output). The same struct doubles as gradient storage.
struct MlpParams {
  Matrix w1;                // d x 16
  std::vector<double> b1;   // 16
  Matrix w2;                // 16 x 2
  std::vector<double> b2;   // 2

  std::size_t input_dim() const { return w1.rows(); }
  bool operator==(const MlpParams& other) const = default;
};

struct TrainConfig {
  std::size_t epochs = 100;
  double learning_rate = 0.01;
  std::size_t fine_tune_epochs = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

// Adam accumulators; moments are shaped like the parameters they update.
struct AdamState {
  MlpParams m;
  MlpParams v;
  std::size_t t = 0;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  AdamState() = default;
  AdamState(const MlpParams& like, double lr);
};

// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out)) per layer), zero
// biases. Fill order: w1 row-major, then w2 row-major.
MlpParams init_params(std::size_t input_dim, std::uint64_t seed);

// n x 2 softmax probabilities; rows sum to 1 and stay finite for logit
// magnitudes far beyond anything training produces (row max subtracted
// before exponentiation).
Matrix forward(const MlpParams& params, const Matrix& features);

// Mean cross-entropy -log p(y_i) and its exact analytic gradient.
std::pair<double, MlpParams> loss_and_grad(const MlpParams& params,
                                           const Dataset& dataset);

// One bias-corrected Adam update; rejects non-finite gradients.
std::pair<MlpParams, AdamState> adam_step(const MlpParams& params,
                                          const AdamState& state,
                                          const MlpParams& grads);

// Fresh initialization followed by config.epochs full-batch Adam steps.
MlpParams train(const Dataset& dataset, const TrainConfig& config);

// config.fine_tune_epochs full-batch Adam steps from the given parameters
// with a fresh AdamState; the input is never modified.
MlpParams fine_tune(const MlpParams& params, const Dataset& dataset,
                    const TrainConfig& config);

// L2 norm of the difference over all weights and biases flattened together.
double weight_l2_distance(const MlpParams& a, const MlpParams& b);

}  // namespace bayesmi
