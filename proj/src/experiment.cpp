#include "bayesmi/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "bayesmi/format.hpp"
#include "bayesmi/metrics.hpp"
#include "bayesmi/pca.hpp"
#include "bayesmi/rng.hpp"

namespace bayesmi {
namespace {

std::vector<std::vector<double>> extract_population(
    const MlpParams& model, const std::vector<Dataset>& subsets,
    const TrainConfig& config) {
  std::vector<std::vector<double>> vectors;
  vectors.reserve(subsets.size());
  for (const auto& subset : subsets) {
    vectors.push_back(extract_metric_vector(model, subset, config).flatten());
  }
  return vectors;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return (values[(n - 1) / 2] + values[n / 2]) / 2.0;
}

void append_rows(Matrix& stacked, std::size_t& row, const Matrix& block) {
  for (std::size_t i = 0; i < block.rows(); ++i, ++row) {
    for (std::size_t j = 0; j < block.cols(); ++j) {
      stacked(row, j) = block(i, j);
    }
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (experiment_id != 1 && experiment_id != 2) {
    throw std::invalid_argument("ExperimentConfig: experiment_id must be 1 or 2");
  }
  if (subsets_per_population < 2) {
    throw std::invalid_argument(
        "ExperimentConfig: calibration needs at least 2 subsets per population");
  }
  if (!(prior_member > 0.0 && prior_member < 1.0)) {
    throw std::invalid_argument("ExperimentConfig: prior_member must lie in (0,1)");
  }
  member.validate();
  nonmember.validate();
  similar_nonmember.validate();
  distinct_test.validate();
  train.validate();
  if (nonmember.n_features != member.n_features ||
      similar_nonmember.n_features != member.n_features ||
      distinct_test.n_features != member.n_features) {
    throw std::invalid_argument(
        "ExperimentConfig: all populations must share n_features");
  }
}

const PosteriorResult& Report::posterior_for(const std::string& key) const {
  for (const auto& [name, result] : posteriors) {
    if (name == key) return result;
  }
  throw std::out_of_range("Report: no posterior named " + key);
}

ExperimentOutput run_experiment_full(const ExperimentConfig& config) {
  config.validate();

  DatasetSpec member_spec = config.member;
  member_spec.seed = derive_seed(config.seed, kStreamMemberPool);
  DatasetSpec nonmember_spec = config.nonmember;
  nonmember_spec.seed = derive_seed(config.seed, kStreamNonmemberPool);
  DatasetSpec similar_spec = config.similar_nonmember;
  similar_spec.seed = derive_seed(config.seed, kStreamSimilarPool);
  DatasetSpec resampled_spec = config.member;
  resampled_spec.seed = derive_seed(config.seed, kStreamResampledTest);
  DatasetSpec distinct_spec = config.distinct_test;
  distinct_spec.seed = derive_seed(config.seed, kStreamDistinctTest);
  TrainConfig train_config = config.train;
  train_config.seed = derive_seed(config.seed, kStreamTraining);

  ExperimentOutput out;
  out.member_subsets = generate_subsets(member_spec, config.subsets_per_population);
  out.model = train(concat(out.member_subsets), train_config);

  out.nonmember_subsets =
      generate_subsets(nonmember_spec, config.subsets_per_population);
  if (config.experiment_id == 2) {
    out.similar_subsets =
        generate_subsets(similar_spec, config.subsets_per_population);
  }

  Report& report = out.report;
  report.config = config;
  auto member_vectors = extract_population(out.model, out.member_subsets, train_config);
  auto nonmember_vectors =
      extract_population(out.model, out.nonmember_subsets, train_config);
  report.population_metrics.emplace_back("member", member_vectors);
  report.population_metrics.emplace_back("nonmember", nonmember_vectors);
  if (config.experiment_id == 2) {
    auto similar_vectors =
        extract_population(out.model, out.similar_subsets, train_config);
    report.population_metrics.emplace_back("similar_nonmember", similar_vectors);
    nonmember_vectors.insert(nonmember_vectors.end(), similar_vectors.begin(),
                             similar_vectors.end());
  }
  report.likelihood = calibrate(member_vectors, nonmember_vectors);

  out.test_resampled = generate_dataset(resampled_spec);
  out.test_distinct = generate_dataset(distinct_spec);

  const Prior prior{config.prior_member};
  report.posteriors.emplace_back(
      "member_subset", posterior_from_model(out.model, out.member_subsets.front(),
                                            report.likelihood, prior, train_config));
  report.posteriors.emplace_back(
      "resampled_similar", posterior_from_model(out.model, out.test_resampled,
                                                report.likelihood, prior,
                                                train_config));
  report.posteriors.emplace_back(
      "distinct", posterior_from_model(out.model, out.test_distinct,
                                       report.likelihood, prior, train_config));
  return out;
}

Report run_experiment(const ExperimentConfig& config) {
  return run_experiment_full(config).report;
}

MultiSeedSummary run_replicates(const ExperimentConfig& base, std::size_t n_seeds) {
  if (n_seeds < 1) {
    throw std::invalid_argument("run_replicates: need at least one seed");
  }
  MultiSeedSummary summary;
  summary.posteriors = {{"member_subset", {}}, {"resampled_similar", {}}, {"distinct", {}}};
  for (std::size_t i = 0; i < n_seeds; ++i) {
    ExperimentConfig config = base;
    config.seed = base.seed + i;
    summary.seeds.push_back(config.seed);
    const Report report = run_experiment(config);
    for (auto& [key, values] : summary.posteriors) {
      values.push_back(report.posterior_for(key).posterior_member);
    }
  }
  for (const auto& [key, values] : summary.posteriors) {
    summary.medians.emplace_back(key, median(values));
  }
  return summary;
}

OrderedJson experiment_config_to_json(const ExperimentConfig& config) {
  OrderedJson doc;
  doc["experiment_id"] = config.experiment_id;
  doc["seed"] = config.seed;
  doc["subsets_per_population"] = config.subsets_per_population;
  doc["prior_member"] = config.prior_member;
  // Population seeds are derived from the top-level seed at run time.
  for (const auto& [key, spec] :
       {std::pair<const char*, const DatasetSpec*>{"member", &config.member},
        {"nonmember", &config.nonmember},
        {"similar_nonmember", &config.similar_nonmember},
        {"distinct_test", &config.distinct_test}}) {
    OrderedJson spec_doc = dataset_spec_to_json(*spec);
    spec_doc.erase("seed");
    doc[key] = std::move(spec_doc);
  }
  doc["train"] = train_config_to_json(config.train);
  return doc;
}

ExperimentConfig experiment_config_from_json(const OrderedJson& doc) {
  ExperimentConfig config;
  config.experiment_id = doc.value("experiment_id", config.experiment_id);
  config.seed = doc.value("seed", config.seed);
  config.subsets_per_population =
      doc.value("subsets_per_population", config.subsets_per_population);
  config.prior_member = doc.value("prior_member", config.prior_member);
  if (doc.contains("member")) config.member = dataset_spec_from_json(doc.at("member"));
  if (doc.contains("nonmember")) {
    config.nonmember = dataset_spec_from_json(doc.at("nonmember"));
  }
  if (doc.contains("similar_nonmember")) {
    config.similar_nonmember = dataset_spec_from_json(doc.at("similar_nonmember"));
  }
  if (doc.contains("distinct_test")) {
    config.distinct_test = dataset_spec_from_json(doc.at("distinct_test"));
  }
  if (doc.contains("train")) config.train = train_config_from_json(doc.at("train"));
  config.validate();
  return config;
}

OrderedJson report_to_json(const Report& report) {
  OrderedJson doc;
  doc["meta"] = {{"tool", kToolName},
                 {"version", kToolVersion},
                 {"report_format", 1},
                 {"projection", "pca"}};
  doc["config"] = experiment_config_to_json(report.config);
  OrderedJson populations;
  for (const auto& [name, vectors] : report.population_metrics) {
    populations[name] = vectors;
  }
  doc["populations"] = std::move(populations);
  doc["likelihood"] = likelihood_to_json(report.likelihood);
  OrderedJson posteriors;
  for (const auto& [name, result] : report.posteriors) {
    posteriors[name] = posterior_to_json(result);
  }
  doc["posteriors"] = std::move(posteriors);
  return doc;
}

OrderedJson multi_seed_to_json(const MultiSeedSummary& summary) {
  OrderedJson doc;
  doc["seeds"] = summary.seeds;
  OrderedJson posteriors;
  for (const auto& [key, values] : summary.posteriors) {
    posteriors[key] = values;
  }
  doc["posteriors"] = std::move(posteriors);
  OrderedJson medians;
  for (const auto& [key, value] : summary.medians) {
    medians[key] = value;
  }
  doc["median_posteriors"] = std::move(medians);
  return doc;
}

void emit_report(const Report& report, const std::string& path) {
  save_json(report_to_json(report), path);
}

void write_metrics_csv(const Report& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << "population,subset," << metric_csv_header(report.config.member.n_features)
      << '\n';
  for (const auto& [name, vectors] : report.population_metrics) {
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      out << name << ',' << i << ',' << metric_csv_row(vectors[i]) << '\n';
    }
  }
  const std::pair<const char*, const char*> test_keys[] = {
      {"test_member", "member_subset"},
      {"test_similar", "resampled_similar"},
      {"test_distinct", "distinct"}};
  for (const auto& [label, key] : test_keys) {
    out << label << ",0," << metric_csv_row(report.posterior_for(key).metrics)
        << '\n';
  }
  if (!out.good()) {
    throw std::runtime_error("write failed: " + path);
  }
}

void write_projection_csv(const ExperimentOutput& output, const std::string& path) {
  struct Block {
    const char* label;
    const Matrix* features;
  };
  std::vector<Block> blocks;
  for (const auto& subset : output.member_subsets) {
    blocks.push_back({"member", &subset.features});
  }
  for (const auto& subset : output.nonmember_subsets) {
    blocks.push_back({"nonmember", &subset.features});
  }
  for (const auto& subset : output.similar_subsets) {
    blocks.push_back({"similar_nonmember", &subset.features});
  }
  blocks.push_back({"test_member", &output.member_subsets.front().features});
  blocks.push_back({"test_similar", &output.test_resampled.features});
  blocks.push_back({"test_distinct", &output.test_distinct.features});

  std::size_t total = 0;
  for (const auto& block : blocks) total += block.features->rows();
  const std::size_t d = output.member_subsets.front().features.cols();
  Matrix stacked(total, d);
  std::size_t row = 0;
  for (const auto& block : blocks) append_rows(stacked, row, *block.features);

  const Matrix coords = pca_projection(stacked);

  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << "population,x,y\n";
  row = 0;
  for (const auto& block : blocks) {
    for (std::size_t i = 0; i < block.features->rows(); ++i, ++row) {
      out << block.label << ',' << format_double(coords(row, 0)) << ','
          << format_double(coords(row, 1)) << '\n';
    }
  }
  if (!out.good()) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace bayesmi
