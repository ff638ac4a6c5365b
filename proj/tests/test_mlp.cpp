#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "bayesmi/dataset.hpp"
#include "bayesmi/json_io.hpp"
#include "bayesmi/mlp.hpp"
#include "oracles.hpp"

using namespace bayesmi;

namespace {

MlpParams zero_params(std::size_t d) {
  MlpParams p;
  p.w1 = Matrix(d, kHiddenUnits);
  p.b1.assign(kHiddenUnits, 0.0);
  p.w2 = Matrix(kHiddenUnits, kNumClasses);
  p.b2.assign(kNumClasses, 0.0);
  return p;
}

}  // namespace

TEST_CASE("init_params is deterministic with zero biases and Glorot bounds") {
  const MlpParams a = init_params(10, 123);
  const MlpParams b = init_params(10, 123);
  CHECK(a == b);
  CHECK(a != init_params(10, 124));

  for (double bias : a.b1) CHECK(bias == 0.0);
  for (double bias : a.b2) CHECK(bias == 0.0);

  const double bound1 = std::sqrt(6.0 / 26.0);  // d=10, 16 hidden
  for (double w : a.w1.data()) CHECK(std::abs(w) <= bound1);
  const double bound2 = std::sqrt(6.0 / 18.0);
  for (double w : a.w2.data()) CHECK(std::abs(w) <= bound2);
}

TEST_CASE("forward with zero parameters is the uniform predictor") {
  const MlpParams p = zero_params(4);
  Matrix x(3, 4);
  x(0, 0) = 1.0;
  x(1, 2) = -2.0;
  x(2, 3) = 0.5;
  const Matrix probs = forward(p, x);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(probs(i, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(probs(i, 1) == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("softmax rows are normalized and survive extreme logits") {
  Rng rng(9);
  const MlpParams p = testing_oracles::random_params(5, rng);
  const Dataset ds = testing_oracles::random_dataset(40, 5, rng);
  const Matrix probs = forward(p, ds.features);
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    CHECK(std::abs(probs(i, 0) + probs(i, 1) - 1.0) <= 1e-12);
    CHECK(probs(i, 0) >= 0.0);
    CHECK(probs(i, 1) >= 0.0);
  }

  // Logit gap of 1e4 through the bias path: no overflow, no NaN.
  MlpParams huge = zero_params(2);
  huge.b2 = {1e4, 0.0};
  Matrix x(1, 2);
  const Matrix extreme = forward(huge, x);
  CHECK(std::isfinite(extreme(0, 0)));
  CHECK(extreme(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(extreme(0, 1) >= 0.0);

  CHECK_THROWS_AS(forward(huge, Matrix(1, 3)), std::invalid_argument);
}

TEST_CASE("cross-entropy loss hits the analytic anchors") {
  // Uniform predictor: loss is ln 2.
  const MlpParams p = zero_params(3);
  Dataset ds;
  ds.features = Matrix(8, 3);
  ds.labels = {0, 1, 0, 1, 0, 1, 0, 1};
  const auto [loss, grads] = loss_and_grad(p, ds);
  CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // Confident correct predictions: loss near zero.
  MlpParams confident = zero_params(3);
  confident.b2 = {50.0, -50.0};
  Dataset all_zero = ds;
  all_zero.labels.assign(8, 0);
  CHECK(loss_and_grad(confident, all_zero).first < 1e-12);

  Dataset empty;
  empty.features = Matrix(0, 3);
  CHECK_THROWS_AS(loss_and_grad(p, empty), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng.next_below(7);
    const std::size_t d = 1 + rng.next_below(4);
    const MlpParams p = testing_oracles::random_params(d, rng);
    const Dataset ds = testing_oracles::random_dataset(n, d, rng);
    const MlpParams analytic = loss_and_grad(p, ds).second;
    const MlpParams numeric =
        testing_oracles::finite_difference_gradient(p, ds, 1e-5);
    CHECK(testing_oracles::max_relative_gradient_error(analytic, numeric) < 1e-4);
  }
}

TEST_CASE("adam_step closed-form behavior") {
  const MlpParams p = init_params(3, 7);
  const AdamState state(p, 0.01);

  SUBCASE("zero gradient leaves parameters untouched") {
    const MlpParams zero_grads = zero_params(3);
    const auto [next, next_state] = adam_step(p, state, zero_grads);
    CHECK(next == p);
    CHECK(next_state.t == 1);
  }

  SUBCASE("first step moves each coordinate by about lr in the gradient direction") {
    MlpParams grads = zero_params(3);
    for (double& g : grads.w1.data()) g = 0.25;
    const auto [next, next_state] = adam_step(p, state, grads);
    for (std::size_t i = 0; i < next.w1.data().size(); ++i) {
      const double delta = next.w1.data()[i] - p.w1.data()[i];
      // m_hat = g, v_hat = g^2, update = -lr * g / (|g| + eps)
      CHECK(delta == doctest::Approx(-0.01 * 0.25 / (0.25 + 1e-8)).epsilon(1e-12));
    }
  }

  SUBCASE("identical inputs give identical trajectories") {
    MlpParams grads = zero_params(3);
    for (double& g : grads.b1) g = -0.5;
    auto [p1, s1] = adam_step(p, state, grads);
    auto [p2, s2] = adam_step(p, state, grads);
    CHECK(p1 == p2);
    std::tie(p1, s1) = adam_step(p1, s1, grads);
    std::tie(p2, s2) = adam_step(p2, s2, grads);
    CHECK(p1 == p2);
  }

  SUBCASE("non-finite gradients are rejected") {
    MlpParams grads = zero_params(3);
    grads.w2(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(adam_step(p, state, grads), std::invalid_argument);
  }
}

TEST_CASE("training fits the member pool and is reproducible") {
  DatasetSpec spec;
  spec.n_points = 200;
  spec.n_features = 10;
  spec.class_sep = 1.0;
  spec.flip_prob = 0.0;
  spec.class_weight0 = 0.5;
  spec.class_weight1 = 0.5;
  spec.seed = 5;
  const Dataset pool = concat(generate_subsets(spec, 10));

  TrainConfig config;
  config.epochs = 100;
  config.learning_rate = 0.01;
  config.fine_tune_epochs = 5;
  config.seed = 17;

  const MlpParams initial = init_params(pool.dim(), config.seed);
  const double initial_loss = loss_and_grad(initial, pool).first;
  const MlpParams model = train(pool, config);
  CHECK(loss_and_grad(model, pool).first < initial_loss);

  // Loss decreases over the full budget for every tested seed.
  for (std::uint64_t seed : {1, 2, 3}) {
    TrainConfig seeded = config;
    seeded.seed = seed;
    const double before =
        loss_and_grad(init_params(pool.dim(), seed), pool).first;
    CHECK(loss_and_grad(train(pool, seeded), pool).first < before);
  }

  const Matrix probs = forward(model, pool.features);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const int predicted = probs(i, 0) >= probs(i, 1) ? 0 : 1;
    correct += (predicted == pool.labels[i]);
  }
  CHECK(static_cast<double>(correct) / pool.size() >= 0.85);

  CHECK(train(pool, config) == model);

  TrainConfig bad = config;
  bad.epochs = 0;
  CHECK_THROWS_AS(train(pool, bad), std::invalid_argument);

  // An absurd learning rate overflows the weights; the non-finite loss is
  // surfaced as a divergence error instead of propagating NaNs.
  TrainConfig divergent = config;
  divergent.learning_rate = 1e300;
  CHECK_THROWS_AS(train(pool, divergent), std::runtime_error);
}

TEST_CASE("fine_tune never mutates its input and is exact at stationary points") {
  Rng rng(77);
  const Dataset ds = testing_oracles::random_dataset(20, 4, rng);
  const MlpParams model = testing_oracles::random_params(4, rng);
  const MlpParams snapshot = model;

  TrainConfig config;
  config.epochs = 1;
  config.fine_tune_epochs = 5;
  const MlpParams tuned = fine_tune(model, ds, config);
  CHECK(model == snapshot);
  CHECK(weight_l2_distance(model, tuned) > 0.0);

  // Stationary point: zero output layer plus labels balanced on duplicated
  // rows makes every gradient exactly zero, so fine-tuning stays put.
  MlpParams stationary = testing_oracles::random_params(3, rng);
  stationary.w2 = Matrix(kHiddenUnits, kNumClasses);
  stationary.b2.assign(kNumClasses, 0.0);
  Dataset degenerate;
  degenerate.features = Matrix(2, 3);
  degenerate.features(0, 0) = degenerate.features(1, 0) = 1.5;
  degenerate.features(0, 1) = degenerate.features(1, 1) = -0.5;
  degenerate.features(0, 2) = degenerate.features(1, 2) = 0.25;
  degenerate.labels = {0, 1};
  const MlpParams after = fine_tune(stationary, degenerate, config);
  CHECK(weight_l2_distance(stationary, after) == 0.0);
}

TEST_CASE("weight_l2_distance is a metric over flattened parameters") {
  const MlpParams a = init_params(6, 3);
  CHECK(weight_l2_distance(a, a) == 0.0);

  MlpParams b = a;
  b.w1(2, 4) += 3.0;
  CHECK(weight_l2_distance(a, b) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(weight_l2_distance(a, b) == weight_l2_distance(b, a));

  const MlpParams other_shape = init_params(7, 3);
  CHECK_THROWS_AS(weight_l2_distance(a, other_shape), std::invalid_argument);
}

TEST_CASE("model JSON round trip is bitwise exact") {
  const MlpParams model = train(
      [] {
        DatasetSpec spec;
        spec.n_points = 40;
        spec.n_features = 5;
        spec.class_sep = 1.0;
        spec.seed = 2;
        return generate_dataset(spec);
      }(),
      TrainConfig{20, 0.01, 5, 9});

  const auto path =
      (std::filesystem::temp_directory_path() / "bayesmi_model_roundtrip.json").string();
  save_json(model_to_json(model), path);
  const MlpParams loaded = model_from_json(load_json_file(path));
  CHECK(loaded == model);
  std::filesystem::remove(path);
}
