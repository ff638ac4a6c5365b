#include "bayesmi/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bayesmi/format.hpp"
#include "bayesmi/rng.hpp"

namespace bayesmi {

void DatasetSpec::validate() const {
  if (n_points < 2) {
    throw std::invalid_argument("DatasetSpec: n_points must be at least 2");
  }
  if (n_features < 1) {
    throw std::invalid_argument("DatasetSpec: n_features must be at least 1");
  }
  if (class_sep < 0.0) {
    throw std::invalid_argument("DatasetSpec: class_sep must be non-negative");
  }
  if (flip_prob < 0.0 || flip_prob > 1.0) {
    throw std::invalid_argument("DatasetSpec: flip_prob must lie in [0,1]");
  }
  if (!(class_weight0 > 0.0 && class_weight0 < 1.0) ||
      !(class_weight1 > 0.0 && class_weight1 < 1.0)) {
    throw std::invalid_argument("DatasetSpec: class weights must lie in (0,1)");
  }
  if (std::abs(class_weight0 + class_weight1 - 1.0) > 1e-12) {
    throw std::invalid_argument("DatasetSpec: class weights must sum to 1");
  }
}

Dataset generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_points;
  const std::size_t d = spec.n_features;
  const auto n0 =
      static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.class_weight0));
  Rng rng(spec.seed);

  Matrix features(n, d);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i < n0 ? 0 : 1;
    const double center = (label == 1 ? 0.5 : -0.5) * spec.class_sep;
    for (std::size_t j = 0; j < d; ++j) {
      features(i, j) = center + rng.normal();
    }
    labels[i] = label;
  }

  // Label noise applies after sampling, so class counts stay exact pre-flip.
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.bernoulli(spec.flip_prob)) {
      labels[i] = 1 - labels[i];
    }
  }

  const auto perm = rng.permutation(n);
  Dataset out;
  out.features = Matrix(n, d);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = perm[i];
    for (std::size_t j = 0; j < d; ++j) {
      out.features(i, j) = features(src, j);
    }
    out.labels[i] = labels[src];
  }
  return out;
}

std::vector<Dataset> generate_subsets(const DatasetSpec& spec, std::size_t k) {
  spec.validate();
  if (k < 1) {
    throw std::invalid_argument("generate_subsets: k must be at least 1");
  }
  std::vector<Dataset> subsets;
  subsets.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    DatasetSpec sub = spec;
    sub.seed = derive_seed(spec.seed, i);
    subsets.push_back(generate_dataset(sub));
  }
  return subsets;
}

Dataset concat(const std::vector<Dataset>& datasets) {
  if (datasets.empty()) {
    throw std::invalid_argument("concat: empty dataset list");
  }
  const std::size_t d = datasets.front().dim();
  std::size_t total = 0;
  for (const auto& ds : datasets) {
    if (ds.dim() != d) {
      throw std::invalid_argument("concat: feature dimension mismatch");
    }
    total += ds.size();
  }
  Dataset out;
  out.features = Matrix(total, d);
  out.labels.reserve(total);
  std::size_t row = 0;
  for (const auto& ds : datasets) {
    for (std::size_t i = 0; i < ds.size(); ++i, ++row) {
      for (std::size_t j = 0; j < d; ++j) {
        out.features(row, j) = ds.features(i, j);
      }
      out.labels.push_back(ds.labels[i]);
    }
  }
  return out;
}

void write_dataset_csv(const Dataset& dataset, std::ostream& out) {
  const std::size_t d = dataset.dim();
  for (std::size_t j = 0; j < d; ++j) {
    out << 'f' << (j + 1) << ',';
  }
  out << "label\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out << format_double(dataset.features(i, j)) << ',';
    }
    out << dataset.labels[i] << '\n';
  }
}

void save_dataset_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  write_dataset_csv(dataset, out);
  if (!out.good()) {
    throw std::runtime_error("write failed: " + path);
  }
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("empty dataset file: " + path);
  }
  std::size_t d = 0;
  for (char c : header) {
    if (c == ',') ++d;
  }
  if (d == 0) {
    throw std::runtime_error("malformed dataset header: " + path);
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::getline(row, cell, ',')) {
        throw std::runtime_error("short row in dataset file: " + path);
      }
      values.push_back(std::stod(cell));
    }
    if (!std::getline(row, cell, ',')) {
      throw std::runtime_error("missing label in dataset file: " + path);
    }
    const int label = std::stoi(cell);
    if (label != 0 && label != 1) {
      throw std::runtime_error("labels must be 0 or 1: " + path);
    }
    labels.push_back(label);
  }
  const std::size_t n = labels.size();
  Dataset dataset;
  dataset.features = Matrix(n, d);
  dataset.features.data() = std::move(values);
  dataset.labels = std::move(labels);
  return dataset;
}

}  // namespace bayesmi
