#include "bayesmi/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bayesmi/rng.hpp"

namespace bayesmi {
namespace {

void check_dataset_shape(const MlpParams& params, const Dataset& dataset) {
  if (dataset.size() == 0) {
    throw std::invalid_argument("mlp: empty dataset");
  }
  if (dataset.dim() != params.input_dim()) {
    throw std::invalid_argument("mlp: feature dimension mismatch");
  }
}

void check_same_shape(const MlpParams& a, const MlpParams& b) {
  if (a.w1.rows() != b.w1.rows() || a.w1.cols() != b.w1.cols() ||
      a.b1.size() != b.b1.size() || a.w2.rows() != b.w2.rows() ||
      a.w2.cols() != b.w2.cols() || a.b2.size() != b.b2.size()) {
    throw std::invalid_argument("mlp: parameter shape mismatch");
  }
}

MlpParams zeros_like(const MlpParams& like) {
  MlpParams out;
  out.w1 = Matrix(like.w1.rows(), like.w1.cols());
  out.b1.assign(like.b1.size(), 0.0);
  out.w2 = Matrix(like.w2.rows(), like.w2.cols());
  out.b2.assign(like.b2.size(), 0.0);
  return out;
}

// ReLU hidden activations, n x 16.
Matrix hidden_layer(const MlpParams& params, const Matrix& features) {
  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  Matrix hidden(n, kHiddenUnits);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t h = 0; h < kHiddenUnits; ++h) {
      double acc = params.b1[h];
      for (std::size_t j = 0; j < d; ++j) {
        acc += features(i, j) * params.w1(j, h);
      }
      hidden(i, h) = acc > 0.0 ? acc : 0.0;
    }
  }
  return hidden;
}

Matrix softmax_from_hidden(const MlpParams& params, const Matrix& hidden) {
  const std::size_t n = hidden.rows();
  Matrix probs(n, kNumClasses);
  for (std::size_t i = 0; i < n; ++i) {
    double logits[kNumClasses];
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      double acc = params.b2[c];
      for (std::size_t h = 0; h < kHiddenUnits; ++h) {
        acc += hidden(i, h) * params.w2(h, c);
      }
      logits[c] = acc;
    }
    const double row_max = std::max(logits[0], logits[1]);
    double sum = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      logits[c] = std::exp(logits[c] - row_max);
      sum += logits[c];
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      probs(i, c) = logits[c] / sum;
    }
  }
  return probs;
}

bool all_finite(const MlpParams& p) {
  const auto finite = [](const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(),
                       [](double x) { return std::isfinite(x); });
  };
  return finite(p.w1.data()) && finite(p.b1) && finite(p.w2.data()) &&
         finite(p.b2);
}

// Applies the Adam recurrence to one flattened parameter block in place.
void adam_update_block(std::vector<double>& param, std::vector<double>& m,
                       std::vector<double>& v, const std::vector<double>& grad,
                       const AdamState& state, double bias1, double bias2) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * grad[i];
    v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / bias1;
    const double v_hat = v[i] / bias2;
    param[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

MlpParams run_adam(MlpParams params, const Dataset& dataset, std::size_t steps,
                   double learning_rate) {
  AdamState state(params, learning_rate);
  for (std::size_t step = 0; step < steps; ++step) {
    auto [loss, grads] = loss_and_grad(params, dataset);
    if (!std::isfinite(loss)) {
      throw std::runtime_error("mlp: training diverged (non-finite loss)");
    }
    std::tie(params, state) = adam_step(params, state, grads);
  }
  return params;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) {
    throw std::invalid_argument("TrainConfig: epochs must be at least 1");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("TrainConfig: learning_rate must be positive");
  }
  if (fine_tune_epochs < 1) {
    throw std::invalid_argument("TrainConfig: fine_tune_epochs must be at least 1");
  }
}

AdamState::AdamState(const MlpParams& like, double lr)
    : m(zeros_like(like)), v(zeros_like(like)), learning_rate(lr) {}

MlpParams init_params(std::size_t input_dim, std::uint64_t seed) {
  if (input_dim < 1) {
    throw std::invalid_argument("init_params: input_dim must be at least 1");
  }
  Rng rng(seed);
  MlpParams params;
  params.w1 = Matrix(input_dim, kHiddenUnits);
  params.b1.assign(kHiddenUnits, 0.0);
  params.w2 = Matrix(kHiddenUnits, kNumClasses);
  params.b2.assign(kNumClasses, 0.0);

  const double bound1 =
      std::sqrt(6.0 / static_cast<double>(input_dim + kHiddenUnits));
  for (double& w : params.w1.data()) {
    w = rng.uniform(-bound1, bound1);
  }
  const double bound2 = std::sqrt(6.0 / static_cast<double>(kHiddenUnits + kNumClasses));
  for (double& w : params.w2.data()) {
    w = rng.uniform(-bound2, bound2);
  }
  return params;
}

Matrix forward(const MlpParams& params, const Matrix& features) {
  if (features.cols() != params.input_dim()) {
    throw std::invalid_argument("forward: feature dimension mismatch");
  }
  return softmax_from_hidden(params, hidden_layer(params, features));
}

std::pair<double, MlpParams> loss_and_grad(const MlpParams& params,
                                           const Dataset& dataset) {
  check_dataset_shape(params, dataset);
  const std::size_t n = dataset.size();
  const std::size_t d = dataset.dim();
  const double inv_n = 1.0 / static_cast<double>(n);

  const Matrix hidden = hidden_layer(params, dataset.features);
  const Matrix probs = softmax_from_hidden(params, hidden);

  MlpParams grads = zeros_like(params);
  double loss = 0.0;
  // dlogits = (probs - onehot(y)) / n, then standard backprop.
  Matrix dlogits(n, kNumClasses);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = dataset.labels[i];
    loss -= std::log(probs(i, static_cast<std::size_t>(y)));
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      dlogits(i, c) = (probs(i, c) - (static_cast<int>(c) == y ? 1.0 : 0.0)) * inv_n;
    }
  }
  loss *= inv_n;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double dl = dlogits(i, c);
      grads.b2[c] += dl;
      for (std::size_t h = 0; h < kHiddenUnits; ++h) {
        grads.w2(h, c) += hidden(i, h) * dl;
      }
    }
    for (std::size_t h = 0; h < kHiddenUnits; ++h) {
      if (hidden(i, h) <= 0.0) continue;  // ReLU gate
      double dh = 0.0;
      for (std::size_t c = 0; c < kNumClasses; ++c) {
        dh += dlogits(i, c) * params.w2(h, c);
      }
      grads.b1[h] += dh;
      for (std::size_t j = 0; j < d; ++j) {
        grads.w1(j, h) += dataset.features(i, j) * dh;
      }
    }
  }
  return {loss, std::move(grads)};
}

std::pair<MlpParams, AdamState> adam_step(const MlpParams& params,
                                          const AdamState& state,
                                          const MlpParams& grads) {
  check_same_shape(params, grads);
  check_same_shape(params, state.m);
  if (!all_finite(grads)) {
    throw std::invalid_argument("adam_step: non-finite gradients");
  }
  MlpParams out = params;
  AdamState next = state;
  next.t = state.t + 1;
  const double bias1 = 1.0 - std::pow(state.beta1, static_cast<double>(next.t));
  const double bias2 = 1.0 - std::pow(state.beta2, static_cast<double>(next.t));
  adam_update_block(out.w1.data(), next.m.w1.data(), next.v.w1.data(),
                    grads.w1.data(), state, bias1, bias2);
  adam_update_block(out.b1, next.m.b1, next.v.b1, grads.b1, state, bias1, bias2);
  adam_update_block(out.w2.data(), next.m.w2.data(), next.v.w2.data(),
                    grads.w2.data(), state, bias1, bias2);
  adam_update_block(out.b2, next.m.b2, next.v.b2, grads.b2, state, bias1, bias2);
  return {std::move(out), std::move(next)};
}

MlpParams train(const Dataset& dataset, const TrainConfig& config) {
  config.validate();
  if (dataset.size() == 0) {
    throw std::invalid_argument("train: empty dataset");
  }
  MlpParams params = init_params(dataset.dim(), config.seed);
  return run_adam(std::move(params), dataset, config.epochs,
                  config.learning_rate);
}

MlpParams fine_tune(const MlpParams& params, const Dataset& dataset,
                    const TrainConfig& config) {
  config.validate();
  check_dataset_shape(params, dataset);
  return run_adam(params, dataset, config.fine_tune_epochs,
                  config.learning_rate);
}

double weight_l2_distance(const MlpParams& a, const MlpParams& b) {
  check_same_shape(a, b);
  double sum = 0.0;
  const auto accumulate = [&sum](const std::vector<double>& x,
                                 const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double diff = x[i] - y[i];
      sum += diff * diff;
    }
  };
  accumulate(a.w1.data(), b.w1.data());
  accumulate(a.b1, b.b1);
  accumulate(a.w2.data(), b.w2.data());
  accumulate(a.b2, b.b2);
  return std::sqrt(sum);
}

}  // namespace bayesmi
