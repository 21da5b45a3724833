// Copyright 2026 The windramp Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "windramp/error.hpp"
#include "windramp/gbrt.hpp"

namespace windramp::gbrt {
namespace {

nlohmann::json tree_to_json(const RegressionTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : tree.nodes) {
    if (n.is_leaf()) {
      nodes.push_back({{"leaf", n.weight}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"default_left", n.default_left}});
    }
  }
  return nodes;
}

RegressionTree tree_from_json(const nlohmann::json& nodes, int num_features) {
  if (!nodes.is_array() || nodes.empty()) throw DataError("tree must be a non-empty node array");
  RegressionTree tree;
  const auto size = static_cast<std::int32_t>(nodes.size());
  std::vector<int> parents(nodes.size(), 0);
  for (std::int32_t i = 0; i < size; ++i) {
    const auto& j = nodes[static_cast<std::size_t>(i)];
    TreeNode n;
    if (j.contains("leaf")) {
      n.weight = j.at("leaf").get<double>();
      if (!std::isfinite(n.weight)) throw DataError("non-finite leaf weight");
    } else {
      n.feature = j.at("feature").get<std::int32_t>();
      n.threshold = j.at("threshold").get<double>();
      n.left = j.at("left").get<std::int32_t>();
      n.right = j.at("right").get<std::int32_t>();
      n.default_left = j.value("default_left", true);
      if (n.feature < 0 || n.feature >= num_features) throw DataError("split feature out of range");
      if (!std::isfinite(n.threshold)) throw DataError("non-finite split threshold");
      for (std::int32_t child : {n.left, n.right}) {
        if (child <= i || child >= size) throw DataError("child index out of range");
        ++parents[static_cast<std::size_t>(child)];
      }
      if (n.left == n.right) throw DataError("node with identical children");
    }
    tree.nodes.push_back(n);
  }
  for (std::size_t i = 1; i < parents.size(); ++i) {
    if (parents[i] != 1) throw DataError("tree node referenced " + std::to_string(parents[i]) + " times");
  }
  return tree;
}

}  // namespace

nlohmann::json to_json(const GbrtModel& model) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& round : model.rounds()) {
    nlohmann::json trees = nlohmann::json::array();
    for (const RegressionTree& t : round) trees.push_back(tree_to_json(t));
    rounds.push_back(std::move(trees));
  }
  nlohmann::json doc = {{"format", "windramp-gbrt"},
                        {"version", kModelFormatVersion},
                        {"num_classes", model.num_classes()},
                        {"num_features", model.num_features()},
                        {"learning_rate", model.learning_rate()},
                        {"base_score", model.base_score()},
                        {"hyperparams", to_json(model.params())},
                        {"rounds", std::move(rounds)}};
  if (model.horizon()) doc["horizon"] = windramp::to_json(*model.horizon());
  return doc;
}

GbrtModel model_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object() || doc.value("format", "") != "windramp-gbrt") {
      throw DataError("not a windramp model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("unsupported model version " + std::to_string(version) + " (expected " +
                      std::to_string(kModelFormatVersion) + ")");
    }
    const int num_classes = doc.at("num_classes").get<int>();
    const int num_features = doc.at("num_features").get<int>();
    if (num_features < 1) throw DataError("model must have at least one feature");
    HyperParams params = hyperparams_from_json(doc.at("hyperparams"));
    params.learning_rate = doc.at("learning_rate").get<double>();
    HyperParams check = params;
    check.n_estimators = std::max(1, check.n_estimators);  // truncated models may hold 0 rounds
    check.validate();
    auto base = doc.at("base_score").get<std::vector<double>>();
    for (double b : base) {
      if (!std::isfinite(b)) throw DataError("non-finite base score");
    }
    GbrtModel model(num_classes, num_features, params, std::move(base));
    for (const auto& round : doc.at("rounds")) {
      std::vector<RegressionTree> trees;
      for (const auto& t : round) trees.push_back(tree_from_json(t, num_features));
      if (trees.size() != static_cast<std::size_t>(num_classes)) {
        throw DataError("a boosting round must hold one tree per class");
      }
      model.add_round(std::move(trees));
    }
    if (doc.contains("horizon")) model.set_horizon(horizon_from_json(doc.at("horizon")));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  } catch (const TrainingError& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  }
}

std::string serialize(const GbrtModel& model) { return to_json(model).dump() + "\n"; }

GbrtModel deserialize(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  }
  return model_from_json(doc);
}

void save_model(const GbrtModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file '" + path + "'");
  out << serialize(model);
}

GbrtModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace windramp::gbrt
