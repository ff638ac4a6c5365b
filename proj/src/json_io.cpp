#include "bayesmi/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bayesmi/format.hpp"

namespace bayesmi {
namespace {

void dump_value(const OrderedJson& value, std::ostringstream& out, int depth) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string child_indent(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (value.type()) {
    case nlohmann::detail::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out << ",\n";
        first = false;
        out << child_indent << OrderedJson(key).dump() << ": ";
        dump_value(item, out, depth + 1);
      }
      out << '\n' << indent << '}';
      return;
    }
    case nlohmann::detail::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out << ",\n";
        first = false;
        out << child_indent;
        dump_value(item, out, depth + 1);
      }
      out << '\n' << indent << ']';
      return;
    }
    case nlohmann::detail::value_t::number_float: {
      const double v = value.get<double>();
      if (!std::isfinite(v)) {
        throw std::invalid_argument("dump_json: non-finite number");
      }
      out << format_double(v);
      return;
    }
    default:
      // Strings, integers, booleans, null: the library formatting is exact.
      out << value.dump();
      return;
  }
}

double require_double(const OrderedJson& doc, const char* key) {
  if (!doc.contains(key)) {
    throw std::invalid_argument(std::string("missing JSON key: ") + key);
  }
  return doc.at(key).get<double>();
}

std::vector<double> require_array(const OrderedJson& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw std::invalid_argument(std::string("missing JSON array: ") + key);
  }
  return doc.at(key).get<std::vector<double>>();
}

OrderedJson matrix_to_json(const Matrix& m) {
  OrderedJson rows = OrderedJson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const OrderedJson& doc, std::size_t rows,
                        std::size_t cols, const char* name) {
  if (!doc.is_array() || doc.size() != rows) {
    throw std::invalid_argument(std::string("bad matrix shape for ") + name);
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = doc.at(i);
    if (!row.is_array() || row.size() != cols) {
      throw std::invalid_argument(std::string("bad matrix row for ") + name);
    }
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = row.at(j).get<double>();
  }
  return m;
}

}  // namespace

std::string dump_json(const OrderedJson& value) {
  std::ostringstream out;
  dump_value(value, out, 0);
  out << '\n';
  return out.str();
}

void save_json(const OrderedJson& value, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << dump_json(value);
  if (!out.good()) {
    throw std::runtime_error("write failed: " + path);
  }
}

OrderedJson load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  try {
    return OrderedJson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
}

OrderedJson model_to_json(const MlpParams& params) {
  OrderedJson doc;
  doc["version"] = 1;
  doc["arch"] = {params.input_dim(), kHiddenUnits, kNumClasses};
  doc["W1"] = matrix_to_json(params.w1);
  doc["b1"] = params.b1;
  doc["W2"] = matrix_to_json(params.w2);
  doc["b2"] = params.b2;
  return doc;
}

MlpParams model_from_json(const OrderedJson& doc) {
  if (!doc.contains("version") || doc.at("version").get<int>() != 1) {
    throw std::invalid_argument("model: unsupported document version");
  }
  const auto arch = doc.at("arch").get<std::vector<std::size_t>>();
  if (arch.size() != 3 || arch[1] != kHiddenUnits || arch[2] != kNumClasses) {
    throw std::invalid_argument("model: unsupported architecture");
  }
  MlpParams params;
  params.w1 = matrix_from_json(doc.at("W1"), arch[0], kHiddenUnits, "W1");
  params.b1 = require_array(doc, "b1");
  params.w2 = matrix_from_json(doc.at("W2"), kHiddenUnits, kNumClasses, "W2");
  params.b2 = require_array(doc, "b2");
  if (params.b1.size() != kHiddenUnits || params.b2.size() != kNumClasses) {
    throw std::invalid_argument("model: bias length mismatch");
  }
  return params;
}

OrderedJson likelihood_to_json(const LikelihoodParams& params) {
  OrderedJson doc;
  doc["mu_member"] = params.mu_member;
  doc["mu_nonmember"] = params.mu_nonmember;
  doc["sigma"] = params.sigma;
  return doc;
}

LikelihoodParams likelihood_from_json(const OrderedJson& doc) {
  LikelihoodParams params;
  params.mu_member = require_array(doc, "mu_member");
  params.mu_nonmember = require_array(doc, "mu_nonmember");
  params.sigma = require_array(doc, "sigma");
  params.validate();
  return params;
}

OrderedJson dataset_spec_to_json(const DatasetSpec& spec) {
  OrderedJson doc;
  doc["n_points"] = spec.n_points;
  doc["n_features"] = spec.n_features;
  doc["class_sep"] = spec.class_sep;
  doc["flip_prob"] = spec.flip_prob;
  doc["class_weights"] = {spec.class_weight0, spec.class_weight1};
  doc["seed"] = spec.seed;
  return doc;
}

DatasetSpec dataset_spec_from_json(const OrderedJson& doc) {
  DatasetSpec spec;
  spec.n_points = doc.at("n_points").get<std::size_t>();
  spec.n_features = doc.at("n_features").get<std::size_t>();
  spec.class_sep = require_double(doc, "class_sep");
  spec.flip_prob = require_double(doc, "flip_prob");
  const auto weights = require_array(doc, "class_weights");
  if (weights.size() != 2) {
    throw std::invalid_argument("DatasetSpec: class_weights must have 2 entries");
  }
  spec.class_weight0 = weights[0];
  spec.class_weight1 = weights[1];
  spec.seed = doc.value("seed", std::uint64_t{0});
  spec.validate();
  return spec;
}

OrderedJson train_config_to_json(const TrainConfig& config) {
  OrderedJson doc;
  doc["epochs"] = config.epochs;
  doc["learning_rate"] = config.learning_rate;
  doc["fine_tune_epochs"] = config.fine_tune_epochs;
  return doc;
}

TrainConfig train_config_from_json(const OrderedJson& doc) {
  TrainConfig config;
  config.epochs = doc.value("epochs", config.epochs);
  config.learning_rate = doc.value("learning_rate", config.learning_rate);
  config.fine_tune_epochs = doc.value("fine_tune_epochs", config.fine_tune_epochs);
  config.seed = doc.value("seed", config.seed);
  config.validate();
  return config;
}

OrderedJson posterior_to_json(const PosteriorResult& result) {
  OrderedJson doc;
  doc["prior_member"] = result.prior_member;
  doc["log_lik_member"] = result.log_lik_member;
  doc["log_lik_nonmember"] = result.log_lik_nonmember;
  doc["posterior_member"] = result.posterior_member;
  if (!result.metrics.empty()) {
    doc["metrics"] = result.metrics;
  }
  return doc;
}

}  // namespace bayesmi
