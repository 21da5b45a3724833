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

// Metrics, stratified splitting and cross-validated grid search.

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "windramp/gbrt.hpp"
#include "windramp/labeling.hpp"

namespace windramp {

// counts(a, p) = instances of true class a predicted as p (1-based ids).
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);

  int num_classes() const noexcept { return num_classes_; }
  std::int64_t operator()(ClassId truth, ClassId predicted) const;
  void add(ClassId truth, ClassId predicted);

  std::int64_t total() const noexcept { return total_; }
  std::int64_t trace() const;
  std::int64_t true_positives(ClassId c) const { return (*this)(c, c); }
  std::int64_t false_positives(ClassId c) const;  // column sum minus diagonal
  std::int64_t false_negatives(ClassId c) const;  // row sum minus diagonal

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t index(ClassId truth, ClassId predicted) const;

  int num_classes_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

ConfusionMatrix confusion(std::span<const ClassId> truth, std::span<const ClassId> predicted,
                          int num_classes);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;  // index c-1 holds class c
  double overall_f1 = 0.0;              // unweighted mean of per-class F1
  double rare_f1 = 0.0;                 // unweighted mean of F1 over the rare classes
  std::optional<HorizonSpec> horizon;
  ConfusionMatrix confusion{2};
};

// Precision, recall and F1 with zero denominators mapped to 0.
MetricsReport compute_metrics(const ConfusionMatrix& cm, std::span<const ClassId> rare_classes);

nlohmann::json to_json(const MetricsReport& report);

struct MultiHorizonReport {
  std::vector<MetricsReport> per_horizon;
  double accuracy = 0.0;         // mean of per-horizon accuracies
  double pooled_accuracy = 0.0;  // correct / total over all horizons
  double overall_f1 = 0.0;       // mean of per-horizon macro-F1
  double rare_f1 = 0.0;          // mean of per-horizon rare-class F1
};

MultiHorizonReport aggregate_horizons(std::vector<MetricsReport> per_horizon);

struct HorizonCase {
  const gbrt::GbrtModel* model;
  const LabeledDataset* test;
};

// Predicts every test set with its model and aggregates across horizons.
// Throws ConfigError when a model was trained for a different horizon.
MultiHorizonReport evaluate_multi_horizon(std::span<const HorizonCase> cases,
                                          std::span<const ClassId> rare_classes, int workers = 1);

nlohmann::json to_json(const MultiHorizonReport& report);

// --- splitting ---------------------------------------------------------------

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
  std::vector<std::string> warnings;
};

// Per-class shuffle with a seeded generator, then largest-remainder
// allocation of round(n * test_fraction) test slots across classes.
SplitIndices stratified_split(std::span<const ClassId> targets, double test_fraction,
                              std::uint64_t seed);

// Validation index sets of k stratified folds (each ascending).
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const ClassId> targets, int folds,
                                                       std::uint64_t seed);

// --- grid search -------------------------------------------------------------

struct ParamGrid {
  std::vector<int> n_estimators_choices{50, 100, 200};
  std::vector<int> max_depth_choices{2, 4, 6};
  int folds = 3;

  void validate() const;
  std::size_t size() const noexcept {
    return n_estimators_choices.size() * max_depth_choices.size();
  }
};

struct GridRow {
  gbrt::HyperParams params;
  std::vector<double> fold_scores;  // validation macro-F1 per fold
  double mean_score = 0.0;
};

struct GridSearchResult {
  gbrt::HyperParams best;
  std::size_t best_index = 0;
  std::vector<GridRow> table;  // n_estimators-major, choices in the given order
  std::vector<std::string> warnings;
};

struct GridSearchOptions {
  int workers = 0;
  const kernels::KernelSet* kernels = nullptr;
};

// k-fold stratified CV over every combination; best = highest mean
// validation macro-F1, ties toward smaller n_estimators then max_depth.
GridSearchResult grid_search(const LabeledDataset& dataset, const ParamGrid& grid,
                             const gbrt::HyperParams& fixed, std::uint64_t seed,
                             const GridSearchOptions& options = {});

nlohmann::json to_json(const GridSearchResult& result);
std::string format_grid_table(const GridSearchResult& result);

}  // namespace windramp
