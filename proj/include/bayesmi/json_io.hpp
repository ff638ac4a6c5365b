#pragma once

#include <string>

#include <json.hpp>

#include "bayesmi/bayes.hpp"
#include "bayesmi/dataset.hpp"
#include "bayesmi/mlp.hpp"

namespace bayesmi {

using OrderedJson = nlohmann::ordered_json;

// Serializer used for every JSON artifact: insertion-ordered keys, two-space
// indent, floating-point numbers with 17 significant digits so a re-parse
// recovers bitwise-identical doubles. Throws on non-finite numbers.
std::string dump_json(const OrderedJson& value);

void save_json(const OrderedJson& value, const std::string& path);
OrderedJson load_json_file(const std::string& path);

// Versioned model document: {"version":1,"arch":[d,16,2],"W1":...,"b1":...,
// "W2":...,"b2":...}.
OrderedJson model_to_json(const MlpParams& params);
MlpParams model_from_json(const OrderedJson& doc);

OrderedJson likelihood_to_json(const LikelihoodParams& params);
LikelihoodParams likelihood_from_json(const OrderedJson& doc);

// {"n_points":...,"n_features":...,"class_sep":...,"flip_prob":...,
//  "class_weights":[w0,w1],"seed":...}; seed defaults to 0 when absent.
OrderedJson dataset_spec_to_json(const DatasetSpec& spec);
DatasetSpec dataset_spec_from_json(const OrderedJson& doc);

OrderedJson train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const OrderedJson& doc);

OrderedJson posterior_to_json(const PosteriorResult& result);

}  // namespace bayesmi
