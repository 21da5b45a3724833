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
#include <set>

#include <omp.h>

#include "windramp/error.hpp"
#include "windramp/gbrt.hpp"

namespace windramp::gbrt {

int resolve_workers(int workers) { return workers > 0 ? workers : std::max(1, omp_get_num_procs()); }

void HyperParams::validate() const {
  if (n_estimators < 1) throw ConfigError("n_estimators must be >= 1");
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be finite and >= 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ConfigError("learning_rate must lie in (0, 1]");
  }
  if (!(min_child_hessian >= 0.0) || !std::isfinite(min_child_hessian)) {
    throw ConfigError("min_child_hessian must be finite and >= 0");
  }
}

nlohmann::json to_json(const HyperParams& p) {
  return {{"n_estimators", p.n_estimators}, {"max_depth", p.max_depth},
          {"lambda", p.lambda},             {"gamma", p.gamma},
          {"learning_rate", p.learning_rate}, {"min_child_hessian", p.min_child_hessian}};
}

HyperParams hyperparams_from_json(const nlohmann::json& j, HyperParams p) {
  p.n_estimators = j.value("n_estimators", p.n_estimators);
  p.max_depth = j.value("max_depth", p.max_depth);
  p.lambda = j.value("lambda", p.lambda);
  p.gamma = j.value("gamma", p.gamma);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.min_child_hessian = j.value("min_child_hessian", p.min_child_hessian);
  return p;
}

GbrtModel::GbrtModel(int num_classes, int num_features, HyperParams params,
                     std::vector<double> base_score)
    : num_classes_(num_classes),
      num_features_(num_features),
      params_(params),
      base_score_(std::move(base_score)) {
  if (num_classes_ < 2) throw TrainingError("a model needs at least two classes");
  if (base_score_.size() != static_cast<std::size_t>(num_classes_)) {
    throw TrainingError("base_score size differs from num_classes");
  }
}

void GbrtModel::add_round(std::vector<RegressionTree> trees) {
  if (trees.size() != static_cast<std::size_t>(num_classes_)) {
    throw TrainingError("a boosting round must hold one tree per class");
  }
  rounds_.push_back(std::move(trees));
}

GbrtModel GbrtModel::truncated(std::size_t rounds) const {
  GbrtModel copy = *this;
  copy.rounds_.resize(std::min(rounds, rounds_.size()));
  copy.params_.n_estimators = static_cast<int>(copy.rounds_.size());
  return copy;
}

void GbrtModel::raw_scores(std::span<const double> row, std::span<double> out) const {
  std::copy(base_score_.begin(), base_score_.end(), out.begin());
  const double lr = params_.learning_rate;
  for (const auto& round : rounds_) {
    for (std::size_t c = 0; c < round.size(); ++c) out[c] += lr * round[c].predict(row);
  }
}

void GbrtModel::check_width(const DenseMatrix& features) const {
  if (features.cols() != static_cast<std::size_t>(num_features_)) {
    throw DataError("feature width " + std::to_string(features.cols()) +
                    " does not match the model's " + std::to_string(num_features_));
  }
}

DenseMatrix GbrtModel::predict_proba(const DenseMatrix& features, int workers) const {
  check_width(features);
  const std::size_t n = features.rows();
  const auto C = static_cast<std::size_t>(num_classes_);
  DenseMatrix proba(n, C);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for num_threads(resolve_workers(workers)) schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto out = proba.row(i);
    raw_scores(features.row(i), out);
    const double max_score = *std::max_element(out.begin(), out.end());
    double sum = 0.0;
    for (double& v : out) {
      v = std::exp(v - max_score);
      sum += v;
    }
    for (double& v : out) v /= sum;
  }
  return proba;
}

ClassId argmax_class(std::span<const double> probabilities) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < probabilities.size(); ++c) {
    if (probabilities[c] > probabilities[best]) best = c;
  }
  return static_cast<ClassId>(best + 1);
}

std::vector<ClassId> GbrtModel::predict_class(const DenseMatrix& features, int workers) const {
  const DenseMatrix proba = predict_proba(features, workers);
  std::vector<ClassId> out(proba.rows());
  for (std::size_t i = 0; i < proba.rows(); ++i) out[i] = argmax_class(proba.row(i));
  return out;
}

namespace {

// Sum of -log softmax(scores_i)[y_i] over class-major scores.
double class_major_loss(const std::vector<double>& scores, std::size_t n, std::size_t C,
                        const std::vector<std::int32_t>& targets) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double max_score = scores[i];
    for (std::size_t c = 1; c < C; ++c) max_score = std::max(max_score, scores[c * n + i]);
    double sum = 0.0;
    for (std::size_t c = 0; c < C; ++c) sum += std::exp(scores[c * n + i] - max_score);
    total += std::log(sum) + max_score - scores[static_cast<std::size_t>(targets[i]) * n + i];
  }
  return total;
}

}  // namespace

TrainResult train(const LabeledDataset& dataset, const HyperParams& params,
                  const TrainOptions& options) {
  params.validate();
  if (dataset.empty()) throw TrainingError("cannot train on an empty dataset");
  dataset.validate();
  if (dataset.features.cols() == 0) throw TrainingError("dataset has no feature columns");
  const std::set<ClassId> present(dataset.targets.begin(), dataset.targets.end());
  if (present.size() < 2) throw TrainingError("training data contains a single class");

  const kernels::KernelSet& kern = options.kernels ? *options.kernels : kernels::active_kernels();
  const std::size_t n = dataset.size();
  const auto C = static_cast<std::size_t>(dataset.num_classes);

  std::vector<std::size_t> counts(C, 0);
  std::vector<std::int32_t> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    targets[i] = dataset.targets[i] - 1;
    ++counts[static_cast<std::size_t>(targets[i])];
  }
  std::vector<double> base(C);
  for (std::size_t c = 0; c < C; ++c) {
    const double prior = static_cast<double>(counts[c]) / static_cast<double>(n);
    base[c] = std::log(std::max(prior, 1e-6));
  }

  const ColumnIndex index(dataset.features);
  GbrtModel model(static_cast<int>(C), static_cast<int>(dataset.features.cols()), params, base);
  model.set_horizon(dataset.horizon);

  std::vector<double> scores(C * n);
  for (std::size_t c = 0; c < C; ++c) std::fill_n(scores.begin() + static_cast<std::ptrdiff_t>(c * n), n, base[c]);
  std::vector<double> grad(C * n);
  std::vector<double> hess(C * n);
  std::vector<double> leaf_of_row(n);

  TrainResult result;
  result.objective_trace.reserve(static_cast<std::size_t>(params.n_estimators) + 1);
  double regularization = 0.0;
  result.objective_trace.push_back(class_major_loss(scores, n, C, targets));

  const GrowOptions grow{options.workers, &kern};
  const double lr = params.learning_rate;
  for (int round = 0; round < params.n_estimators; ++round) {
    kern.softmax_gradients(scores.data(), n, static_cast<int>(C), targets.data(), grad.data(),
                           hess.data());
    std::vector<RegressionTree> trees;
    trees.reserve(C);
    for (std::size_t c = 0; c < C; ++c) {
      const std::span<const double> g(grad.data() + c * n, n);
      const std::span<const double> h(hess.data() + c * n, n);
      RegressionTree tree = grow_tree(index, g, h, params, grow, leaf_of_row);
      kern.add_scaled(scores.data() + c * n, leaf_of_row.data(), lr, n);
      for (const TreeNode& node : tree.nodes) {
        if (!node.is_leaf()) continue;
        const double applied = lr * node.weight;
        regularization += params.gamma + 0.5 * params.lambda * applied * applied;
      }
      trees.push_back(std::move(tree));
    }
    model.add_round(std::move(trees));
    result.objective_trace.push_back(class_major_loss(scores, n, C, targets) + regularization);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace windramp::gbrt
