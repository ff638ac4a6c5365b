#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bayesmi/bayes.hpp"
#include "bayesmi/dataset.hpp"
#include "bayesmi/json_io.hpp"
#include "bayesmi/mlp.hpp"

namespace bayesmi {

inline constexpr const char* kToolName = "bayesmi";
inline constexpr const char* kToolVersion = "0.1.0";

// Seed streams derived from ExperimentConfig::seed. The population and test
// streams do not depend on the experiment id, so experiments 1 and 2 with
// the same seed share the trained model and all three test sets.
enum SeedStream : std::uint64_t {
  kStreamMemberPool = 0,
  kStreamNonmemberPool = 1,
  kStreamSimilarPool = 2,
  kStreamResampledTest = 3,
  kStreamDistinctTest = 4,
  kStreamTraining = 5,
};

// Full description of one experiment run; defaults reproduce the reference
// setup (10 subsets of 200 points in 10 dimensions per population).
struct ExperimentConfig {
  int experiment_id = 1;
  std::uint64_t seed = 42;
  std::size_t subsets_per_population = 10;
  double prior_member = 0.5;
  DatasetSpec member{200, 10, 1.0, 0.0, 0.5, 0.5, 0};
  DatasetSpec nonmember{200, 10, 5.0, 0.2, 0.8, 0.2, 0};
  DatasetSpec similar_nonmember{200, 10, 3.0, 0.0, 0.5, 0.5, 0};
  DatasetSpec distinct_test{200, 10, 3.0, 0.2, 0.8, 0.2, 0};
  TrainConfig train{100, 0.01, 5, 0};

  void validate() const;
};

// Everything report.json carries. Population metric tables hold one
// flattened metric vector per subset; posteriors are keyed member_subset,
// resampled_similar, distinct, in that order.
struct Report {
  ExperimentConfig config;
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>>
      population_metrics;
  LikelihoodParams likelihood;
  std::vector<std::pair<std::string, PosteriorResult>> posteriors;

  const PosteriorResult& posterior_for(const std::string& key) const;
};

// Report plus the raw material the CSV emitters need.
struct ExperimentOutput {
  Report report;
  MlpParams model;
  std::vector<Dataset> member_subsets;
  std::vector<Dataset> nonmember_subsets;
  std::vector<Dataset> similar_subsets;  // experiment 2 only
  Dataset test_resampled;
  Dataset test_distinct;
};

ExperimentOutput run_experiment_full(const ExperimentConfig& config);
Report run_experiment(const ExperimentConfig& config);

// Replicates with seeds base, base+1, ..., base+n_seeds-1 and the median
// posterior per test set.
struct MultiSeedSummary {
  std::vector<std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::vector<double>>> posteriors;
  std::vector<std::pair<std::string, double>> medians;
};

MultiSeedSummary run_replicates(const ExperimentConfig& base, std::size_t n_seeds);

OrderedJson experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const OrderedJson& doc);

OrderedJson report_to_json(const Report& report);
OrderedJson multi_seed_to_json(const MultiSeedSummary& summary);

void emit_report(const Report& report, const std::string& path);

// population,subset,pred_error,... rows for every calibration subset and
// the three test sets.
void write_metrics_csv(const Report& report, const std::string& path);

// PCA coordinates of every point, labeled by population:
// member, nonmember, similar_nonmember, test_member, test_similar,
// test_distinct.
void write_projection_csv(const ExperimentOutput& output, const std::string& path);

}  // namespace bayesmi
