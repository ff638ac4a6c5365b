#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bayesmi/matrix.hpp"

namespace bayesmi {

// Parameters of one synthetic binary-classification population.
//
// Points of class c are drawn from an isotropic unit-variance Gaussian
// centered at +(class_sep/2)*1_d for class 1 and -(class_sep/2)*1_d for
// class 0. Class counts are fixed before label noise: class 0 receives
// round(n_points * class_weight0) points, class 1 the remainder.
struct DatasetSpec {
  std::size_t n_points = 0;
  std::size_t n_features = 0;
  double class_sep = 0.0;
  double flip_prob = 0.0;
  double class_weight0 = 0.5;
  double class_weight1 = 0.5;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on violated invariants.
  void validate() const;
};

struct Dataset {
  Matrix features;             // n x d
  std::vector<int> labels;     // values in {0,1}, length n

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
};

// Deterministic generation, fully determined by spec.seed. Draw order:
// class-0 rows then class-1 rows (each row filled feature by feature), one
// flip decision per point in row order, then a Fisher-Yates shuffle of the
// row order.
Dataset generate_dataset(const DatasetSpec& spec);

// k datasets with per-subset seeds derive_seed(spec.seed, index); safe to
// generate in parallel, identical results in any order.
std::vector<Dataset> generate_subsets(const DatasetSpec& spec, std::size_t k);

// Row-stacks datasets sharing a feature dimension, order preserved.
Dataset concat(const std::vector<Dataset>& datasets);

// CSV export: header f1,...,fd,label, features with 17 significant digits.
void write_dataset_csv(const Dataset& dataset, std::ostream& out);
void save_dataset_csv(const Dataset& dataset, const std::string& path);
Dataset load_dataset_csv(const std::string& path);

}  // namespace bayesmi
