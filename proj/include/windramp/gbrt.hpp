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

#pragma once

// Multi-class gradient boosted regression trees.
//
// Each boosting round computes softmax cross-entropy gradients g and
// hessians h at the current scores and grows one regression tree per class
// against them. A leaf with gradient sum G and hessian sum H gets weight
// -G / (H + lambda); a split is scored by
//
//   gain = 1/2 [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)] - gamma
//
// which is the reduction of the second-order objective under the
// regularizer gamma * leaves + 1/2 lambda * sum(w^2). Split search is exact
// over pre-sorted feature columns and runs feature-parallel; per-feature
// results are reduced in feature order so models are bit-identical for any
// worker count.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "windramp/kernels.hpp"
#include "windramp/labeling.hpp"
#include "windramp/matrix.hpp"

namespace windramp::gbrt {

struct HyperParams {
  int n_estimators = 100;
  int max_depth = 6;
  double lambda = 1.0;
  double gamma = 0.0;
  double learning_rate = 0.3;
  double min_child_hessian = 1.0;

  void validate() const;  // throws ConfigError
  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

nlohmann::json to_json(const HyperParams& params);
HyperParams hyperparams_from_json(const nlohmann::json& j, HyperParams defaults = {});

struct GradientPair {
  double g = 0.0;
  double h = 0.0;
};

// Gradients of the softmax cross-entropy for n rows and C classes. `scores`
// is row-major n x C; the result is row-major n x C. Targets are 1-based.
std::vector<GradientPair> softmax_gradients(const DenseMatrix& scores, std::span<const ClassId> targets);

// Softmax cross-entropy -log p_y summed over rows (row-major n x C scores).
double cross_entropy(const DenseMatrix& scores, std::span<const ClassId> targets);

// Flat node of a regression tree. Internal nodes route a row left when
// x[feature] < threshold. default_left is reserved for missing values and
// is always true.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  bool default_left = true;
  double weight = 0.0;  // leaf value before learning-rate scaling

  bool is_leaf() const noexcept { return left < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> row) const;
  int depth() const;
  std::size_t num_leaves() const;
  double sum_squared_leaf_weights() const;
  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

class GbrtModel {
 public:
  GbrtModel() = default;
  GbrtModel(int num_classes, int num_features, HyperParams params, std::vector<double> base_score);

  int num_classes() const noexcept { return num_classes_; }
  int num_features() const noexcept { return num_features_; }
  double learning_rate() const noexcept { return params_.learning_rate; }
  const HyperParams& params() const noexcept { return params_; }
  const std::vector<double>& base_score() const noexcept { return base_score_; }
  const std::vector<std::vector<RegressionTree>>& rounds() const noexcept { return rounds_; }
  std::size_t num_rounds() const noexcept { return rounds_.size(); }

  const std::optional<HorizonSpec>& horizon() const noexcept { return horizon_; }
  void set_horizon(const HorizonSpec& h) { horizon_ = h; }

  void add_round(std::vector<RegressionTree> trees);
  // Copy holding only the first `rounds` boosting rounds.
  GbrtModel truncated(std::size_t rounds) const;

  // Raw additive scores: base_score + sum over rounds of lr * tree(x).
  void raw_scores(std::span<const double> row, std::span<double> out) const;
  DenseMatrix predict_proba(const DenseMatrix& features, int workers = 1) const;
  std::vector<ClassId> predict_class(const DenseMatrix& features, int workers = 1) const;

  friend bool operator==(const GbrtModel&, const GbrtModel&) = default;

 private:
  void check_width(const DenseMatrix& features) const;

  int num_classes_ = 0;
  int num_features_ = 0;
  HyperParams params_;
  std::vector<double> base_score_;
  std::vector<std::vector<RegressionTree>> rounds_;
  std::optional<HorizonSpec> horizon_;
};

// Argmax with ties resolved toward the lower class id.
ClassId argmax_class(std::span<const double> probabilities);

// --- split search --------------------------------------------------------

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  double left_g = 0.0;
  double left_h = 0.0;
  double right_g = 0.0;
  double right_h = 0.0;
  std::size_t left_count = 0;
};

// Strict ordering used for the reduction: higher gain, then lower feature,
// then lower threshold.
bool better_split(const SplitCandidate& a, const SplitCandidate& b);

// Working buffers for one thread.
struct SplitScratch {
  std::vector<double> values;
  std::vector<double> prefix_g;
  std::vector<double> prefix_h;
  std::vector<double> gains;
};

// Best split of one feature for a node. `sorted_rows` are the node's rows in
// ascending order of `column` values; `grad`/`hess` are indexed by row.
// Only thresholds between distinct consecutive values with both children
// holding hessian >= min_child_hessian and gain > 0 qualify.
std::optional<SplitCandidate> best_split_for_feature(
    int feature, std::span<const std::uint32_t> sorted_rows, std::span<const double> column,
    std::span<const double> grad, std::span<const double> hess, double total_g, double total_h,
    const HyperParams& params, const kernels::KernelSet& kernels, SplitScratch& scratch);

// Whole-node search: sorts the node's rows per feature, evaluates every
// feature (in parallel when workers > 1) and reduces deterministically.
std::optional<SplitCandidate> find_best_split(const DenseMatrix& features,
                                              std::span<const std::uint32_t> rows,
                                              std::span<const double> grad,
                                              std::span<const double> hess,
                                              const HyperParams& params, int workers = 1,
                                              const kernels::KernelSet* kernels = nullptr);

// --- tree growth and training --------------------------------------------

// Column-major copy of the features with every column's row order sorted
// once. Shared read-only by all trees of a training run.
class ColumnIndex {
 public:
  explicit ColumnIndex(const DenseMatrix& features);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const double> column(std::size_t f) const { return {values_.data() + f * rows_, rows_}; }
  std::span<const std::uint32_t> sorted(std::size_t f) const {
    return {order_.data() + f * rows_, rows_};
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  std::vector<std::uint32_t> order_;
};

struct GrowOptions {
  int workers = 1;
  const kernels::KernelSet* kernels = nullptr;  // nullptr selects active_kernels()
};

// Level-wise greedy growth to params.max_depth over all rows of `index`.
// When `leaf_of_row` is non-empty it receives each row's leaf weight.
RegressionTree grow_tree(const ColumnIndex& index, std::span<const double> grad,
                         std::span<const double> hess, const HyperParams& params,
                         const GrowOptions& options, std::span<double> leaf_of_row = {});

struct TrainOptions {
  int workers = 0;  // 0 = all available cores
  const kernels::KernelSet* kernels = nullptr;
};

struct TrainResult {
  GbrtModel model;
  // Regularized objective sum_i l_i + sum_k Omega(f_k) after 0..n rounds.
  std::vector<double> objective_trace;
};

TrainResult train(const LabeledDataset& dataset, const HyperParams& params,
                  const TrainOptions& options = {});

// --- model file ------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const GbrtModel& model);
GbrtModel model_from_json(const nlohmann::json& doc);
std::string serialize(const GbrtModel& model);
GbrtModel deserialize(std::string_view text);
void save_model(const GbrtModel& model, const std::string& path);
GbrtModel load_model(const std::string& path);

int resolve_workers(int workers);

}  // namespace windramp::gbrt
