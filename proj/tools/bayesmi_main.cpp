#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bayesmi/experiment.hpp"
#include "bayesmi/json_io.hpp"
#include "bayesmi/rng.hpp"

namespace {

using bayesmi::ExperimentConfig;
using bayesmi::OrderedJson;

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  return bayesmi::experiment_config_from_json(bayesmi::load_json_file(path));
}

int run_generate(const std::string& spec_path, const std::string& out_path) {
  const auto spec = bayesmi::dataset_spec_from_json(bayesmi::load_json_file(spec_path));
  bayesmi::save_dataset_csv(bayesmi::generate_dataset(spec), out_path);
  return 0;
}

int run_train(const ExperimentConfig& config, const std::string& out_path) {
  bayesmi::DatasetSpec member_spec = config.member;
  member_spec.seed = bayesmi::derive_seed(config.seed, bayesmi::kStreamMemberPool);
  bayesmi::TrainConfig train_config = config.train;
  train_config.seed = bayesmi::derive_seed(config.seed, bayesmi::kStreamTraining);
  const auto subsets =
      bayesmi::generate_subsets(member_spec, config.subsets_per_population);
  const auto model = bayesmi::train(bayesmi::concat(subsets), train_config);
  bayesmi::save_json(bayesmi::model_to_json(model), out_path);
  return 0;
}

int run_infer(const std::string& model_path, const std::string& lik_path,
              const std::string& data_path, double prior_member,
              const ExperimentConfig& config) {
  const auto model = bayesmi::model_from_json(bayesmi::load_json_file(model_path));
  const auto lik =
      bayesmi::likelihood_from_json(bayesmi::load_json_file(lik_path));
  const auto dataset = bayesmi::load_dataset_csv(data_path);
  const auto result = bayesmi::posterior_from_model(
      model, dataset, lik, bayesmi::Prior{prior_member}, config.train);
  std::cout << bayesmi::dump_json(bayesmi::posterior_to_json(result));
  return 0;
}

int run_experiment_cmd(ExperimentConfig config, std::size_t n_seeds,
                       const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto output = bayesmi::run_experiment_full(config);
  OrderedJson report_doc = bayesmi::report_to_json(output.report);
  if (n_seeds > 1) {
    report_doc["multi_seed"] =
        bayesmi::multi_seed_to_json(bayesmi::run_replicates(config, n_seeds));
  }
  bayesmi::save_json(report_doc, out_dir + "/report.json");
  bayesmi::write_metrics_csv(output.report, out_dir + "/metrics.csv");
  bayesmi::write_projection_csv(output, out_dir + "/projection.csv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian membership inference on synthetic datasets"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "Generate a dataset CSV from a spec");
  std::string gen_spec, gen_out;
  generate->add_option("--spec", gen_spec, "DatasetSpec JSON file")->required();
  generate->add_option("--out", gen_out, "Output CSV path")->required();

  auto* train = app.add_subcommand("train", "Train the classifier on the member pool");
  std::string train_config_path, train_out;
  std::uint64_t train_seed = 0;
  train->add_option("--config", train_config_path, "Experiment config JSON");
  auto* train_seed_opt = train->add_option("--seed", train_seed, "Master seed override");
  train->add_option("--out", train_out, "Output model JSON path")->required();

  auto* infer = app.add_subcommand("infer", "Score one dataset against a likelihood model");
  std::string infer_model, infer_lik, infer_data, infer_config_path;
  double infer_prior = 0.5;
  infer->add_option("--model", infer_model, "Model JSON file")->required();
  infer->add_option("--likelihood", infer_lik, "LikelihoodParams JSON file")->required();
  infer->add_option("--data", infer_data, "Dataset CSV file")->required();
  infer->add_option("--prior", infer_prior, "Prior membership probability");
  infer->add_option("--config", infer_config_path,
                    "Experiment config JSON (fine-tuning settings)");

  auto* experiment = app.add_subcommand("experiment", "Run a full experiment");
  std::string exp_config_path, exp_out;
  int exp_id = 0;
  std::uint64_t exp_seed = 0;
  std::size_t exp_seeds = 1;
  auto* exp_id_opt =
      experiment->add_option("--id", exp_id, "Experiment id (1 or 2)")
          ->check(CLI::IsMember({1, 2}));
  auto* exp_seed_opt = experiment->add_option("--seed", exp_seed, "Master seed");
  experiment->add_option("--seeds", exp_seeds, "Number of replicate seeds")
      ->check(CLI::PositiveNumber);
  experiment->add_option("--config", exp_config_path, "Experiment config JSON");
  experiment->add_option("--out", exp_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    OrderedJson error;
    error["error"] = e.what();
    std::cerr << bayesmi::dump_json(error);
    return 1;
  }

  try {
    if (*generate) return run_generate(gen_spec, gen_out);
    if (*train) {
      ExperimentConfig config = load_config(train_config_path);
      if (train_seed_opt->count() > 0) config.seed = train_seed;
      return run_train(config, train_out);
    }
    if (*infer) {
      return run_infer(infer_model, infer_lik, infer_data, infer_prior,
                       load_config(infer_config_path));
    }
    if (*experiment) {
      ExperimentConfig config = load_config(exp_config_path);
      if (exp_id_opt->count() > 0) config.experiment_id = exp_id;
      if (exp_seed_opt->count() > 0) config.seed = exp_seed;
      return run_experiment_cmd(config, exp_seeds, exp_out);
    }
  } catch (const std::exception& e) {
    OrderedJson error;
    error["error"] = e.what();
    std::cerr << bayesmi::dump_json(error);
    return 1;
  }
  return 0;
}
