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

#include "windramp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "windramp/error.hpp"

namespace windramp {

ConfusionMatrix::ConfusionMatrix(int num_classes)
    : num_classes_(num_classes),
      counts_(static_cast<std::size_t>(num_classes) * static_cast<std::size_t>(num_classes), 0) {
  if (num_classes < 1) throw ConfigError("confusion matrix needs at least one class");
}

std::size_t ConfusionMatrix::index(ClassId truth, ClassId predicted) const {
  if (truth < 1 || truth > num_classes_ || predicted < 1 || predicted > num_classes_) {
    throw DataError("class id out of range 1.." + std::to_string(num_classes_));
  }
  return static_cast<std::size_t>(truth - 1) * static_cast<std::size_t>(num_classes_) +
         static_cast<std::size_t>(predicted - 1);
}

std::int64_t ConfusionMatrix::operator()(ClassId truth, ClassId predicted) const {
  return counts_[index(truth, predicted)];
}

void ConfusionMatrix::add(ClassId truth, ClassId predicted) {
  ++counts_[index(truth, predicted)];
  ++total_;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (ClassId c = 1; c <= num_classes_; ++c) t += (*this)(c, c);
  return t;
}

std::int64_t ConfusionMatrix::false_positives(ClassId c) const {
  std::int64_t s = 0;
  for (ClassId a = 1; a <= num_classes_; ++a) {
    if (a != c) s += (*this)(a, c);
  }
  return s;
}

std::int64_t ConfusionMatrix::false_negatives(ClassId c) const {
  std::int64_t s = 0;
  for (ClassId p = 1; p <= num_classes_; ++p) {
    if (p != c) s += (*this)(c, p);
  }
  return s;
}

ConfusionMatrix confusion(std::span<const ClassId> truth, std::span<const ClassId> predicted,
                          int num_classes) {
  if (truth.size() != predicted.size()) {
    throw DataError("true and predicted label lists differ in length (" +
                    std::to_string(truth.size()) + " vs " + std::to_string(predicted.size()) + ")");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return cm;
}

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

MetricsReport compute_metrics(const ConfusionMatrix& cm, std::span<const ClassId> rare_classes) {
  if (cm.total() == 0) throw DataError("metrics of an empty confusion matrix");
  MetricsReport r;
  r.confusion = cm;
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
  std::vector<double> f1s;
  for (ClassId c = 1; c <= cm.num_classes(); ++c) {
    const auto tp = static_cast<double>(cm.true_positives(c));
    const auto fp = static_cast<double>(cm.false_positives(c));
    const auto fn = static_cast<double>(cm.false_negatives(c));
    ClassMetrics m;
    m.precision = ratio_or_zero(tp, tp + fp);
    m.recall = ratio_or_zero(tp, tp + fn);
    m.f1 = ratio_or_zero(2.0 * m.precision * m.recall, m.precision + m.recall);
    m.support = cm.true_positives(c) + cm.false_negatives(c);
    r.per_class.push_back(m);
    f1s.push_back(m.f1);
  }
  r.overall_f1 = mean(f1s);
  std::vector<double> rare;
  for (ClassId c : rare_classes) {
    if (c < 1 || c > cm.num_classes()) throw ConfigError("rare class id out of range");
    rare.push_back(r.per_class[static_cast<std::size_t>(c - 1)].f1);
  }
  r.rare_f1 = mean(rare);
  return r;
}

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const ClassMetrics& m = report.per_class[c];
    per_class.push_back({{"class", c + 1},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"support", m.support}});
  }
  nlohmann::json matrix = nlohmann::json::array();
  const int C = report.confusion.num_classes();
  for (ClassId a = 1; a <= C; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (ClassId p = 1; p <= C; ++p) row.push_back(report.confusion(a, p));
    matrix.push_back(std::move(row));
  }
  nlohmann::json j = {{"accuracy", report.accuracy},
                      {"overall_f1", report.overall_f1},
                      {"rare_f1", report.rare_f1},
                      {"per_class", per_class},
                      {"confusion", matrix},
                      {"instances", report.confusion.total()}};
  if (report.horizon) j["horizon"] = to_json(*report.horizon);
  return j;
}

MultiHorizonReport aggregate_horizons(std::vector<MetricsReport> per_horizon) {
  if (per_horizon.empty()) throw ConfigError("no horizons to aggregate");
  MultiHorizonReport out;
  std::vector<double> acc;
  std::vector<double> f1;
  std::vector<double> rare;
  std::int64_t correct = 0;
  std::int64_t total = 0;
  for (const MetricsReport& r : per_horizon) {
    acc.push_back(r.accuracy);
    f1.push_back(r.overall_f1);
    rare.push_back(r.rare_f1);
    correct += r.confusion.trace();
    total += r.confusion.total();
  }
  out.accuracy = mean(acc);
  out.overall_f1 = mean(f1);
  out.rare_f1 = mean(rare);
  out.pooled_accuracy = static_cast<double>(correct) / static_cast<double>(total);
  out.per_horizon = std::move(per_horizon);
  return out;
}

MultiHorizonReport evaluate_multi_horizon(std::span<const HorizonCase> cases,
                                          std::span<const ClassId> rare_classes, int workers) {
  std::vector<MetricsReport> reports;
  for (const HorizonCase& c : cases) {
    if (c.model->horizon() && !(*c.model->horizon() == c.test->horizon)) {
      throw ConfigError("model trained for horizon S=" +
                        std::to_string(c.model->horizon()->steps_ahead) +
                        " evaluated on a test set for S=" +
                        std::to_string(c.test->horizon.steps_ahead));
    }
    if (c.model->num_classes() != c.test->num_classes) {
      throw ConfigError("model and test set disagree on the number of classes");
    }
    const auto predicted = c.model->predict_class(c.test->features, workers);
    MetricsReport r =
        compute_metrics(confusion(c.test->targets, predicted, c.test->num_classes), rare_classes);
    r.horizon = c.test->horizon;
    reports.push_back(std::move(r));
  }
  return aggregate_horizons(std::move(reports));
}

nlohmann::json to_json(const MultiHorizonReport& report) {
  nlohmann::json per = nlohmann::json::array();
  for (const MetricsReport& r : report.per_horizon) per.push_back(to_json(r));
  return {{"accuracy", report.accuracy},
          {"pooled_accuracy", report.pooled_accuracy},
          {"overall_f1", report.overall_f1},
          {"rare_f1", report.rare_f1},
          {"per_horizon", per}};
}

namespace {

// Fisher-Yates with raw mt19937_64 draws; the standard library's
// distributions are implementation-defined, this is not.
void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

std::map<ClassId, std::vector<std::size_t>> shuffled_members(std::span<const ClassId> targets,
                                                             std::uint64_t seed) {
  std::map<ClassId, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < targets.size(); ++i) members[targets[i]].push_back(i);
  std::mt19937_64 rng(seed);
  for (auto& [cls, rows] : members) shuffle(rows, rng);
  return members;
}

}  // namespace

SplitIndices stratified_split(std::span<const ClassId> targets, double test_fraction,
                              std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("test fraction must lie in (0, 1)");
  }
  if (targets.empty()) throw DataError("cannot split an empty dataset");
  const auto members = shuffled_members(targets, seed);
  const auto n = static_cast<double>(targets.size());
  auto remaining = static_cast<std::int64_t>(std::llround(n * test_fraction));

  struct Quota {
    ClassId cls;
    std::size_t take;
    std::size_t cap;
    double remainder;
  };
  std::vector<Quota> quotas;
  SplitIndices out;
  for (const auto& [cls, rows] : members) {
    if (rows.size() < 2) {
      out.warnings.push_back("class " + std::to_string(cls) +
                             " has a single instance; assigned to train");
      quotas.push_back({cls, 0, 0, 0.0});
      continue;
    }
    const double exact = static_cast<double>(rows.size()) * test_fraction;
    const std::size_t cap = rows.size() - 1;
    const auto take = std::min(static_cast<std::size_t>(std::floor(exact)), cap);
    quotas.push_back({cls, take, cap, exact - std::floor(exact)});
    remaining -= static_cast<std::int64_t>(take);
  }
  std::vector<std::size_t> by_remainder(quotas.size());
  std::iota(by_remainder.begin(), by_remainder.end(), 0);
  std::stable_sort(by_remainder.begin(), by_remainder.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a].remainder > quotas[b].remainder;
  });
  for (std::size_t q : by_remainder) {
    if (remaining <= 0) break;
    if (quotas[q].take < quotas[q].cap && quotas[q].remainder > 0.0) {
      ++quotas[q].take;
      --remaining;
    }
  }

  for (const Quota& q : quotas) {
    const auto& rows = members.at(q.cls);
    out.test.insert(out.test.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(q.take));
    out.train.insert(out.train.end(), rows.begin() + static_cast<std::ptrdiff_t>(q.take), rows.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const ClassId> targets, int folds,
                                                       std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (targets.size() < static_cast<std::size_t>(folds)) {
    throw ConfigError("fewer rows than folds");
  }
  const auto k = static_cast<std::size_t>(folds);
  std::vector<std::vector<std::size_t>> out(k);
  std::size_t offset = 0;
  for (const auto& [cls, rows] : shuffled_members(targets, seed)) {
    for (std::size_t j = 0; j < rows.size(); ++j) out[(offset + j) % k].push_back(rows[j]);
    offset = (offset + rows.size()) % k;
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

void ParamGrid::validate() const {
  if (n_estimators_choices.empty() || max_depth_choices.empty()) {
    throw ConfigError("parameter grid choice lists must be non-empty");
  }
  if (folds < 2) throw ConfigError("grid search needs at least 2 folds");
  for (int n : n_estimators_choices) {
    if (n < 1) throw ConfigError("n_estimators choices must be >= 1");
  }
  for (int d : max_depth_choices) {
    if (d < 1) throw ConfigError("max_depth choices must be >= 1");
  }
}

GridSearchResult grid_search(const LabeledDataset& dataset, const ParamGrid& grid,
                             const gbrt::HyperParams& fixed, std::uint64_t seed,
                             const GridSearchOptions& options) {
  grid.validate();
  const auto folds = stratified_kfold(dataset.targets, grid.folds, seed);
  GridSearchResult result;

  const auto dist = class_distribution(dataset.targets, dataset.num_classes);
  for (std::size_t c = 0; c < dist.counts.size(); ++c) {
    if (dist.counts[c] > 0 && dist.counts[c] < static_cast<std::size_t>(grid.folds)) {
      result.warnings.push_back("class " + std::to_string(c + 1) + " has fewer instances than folds");
    }
  }

  std::vector<LabeledDataset> train_sets;
  std::vector<LabeledDataset> valid_sets;
  std::vector<bool> in_fold(dataset.size());
  for (const auto& fold : folds) {
    std::fill(in_fold.begin(), in_fold.end(), false);
    for (std::size_t i : fold) in_fold[i] = true;
    std::vector<std::size_t> train_rows;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (!in_fold[i]) train_rows.push_back(i);
    }
    LabeledDataset train = dataset.subset(train_rows);
    const auto classes = std::set<ClassId>(train.targets.begin(), train.targets.end());
    if (fold.empty() || classes.size() < 2) {
      throw ConfigError("infeasible cross-validation folds: a fold is empty or its training part "
                        "holds a single class");
    }
    train_sets.push_back(std::move(train));
    valid_sets.push_back(dataset.subset(fold));
  }

  const int max_rounds =
      *std::max_element(grid.n_estimators_choices.begin(), grid.n_estimators_choices.end());
  const std::size_t D = grid.max_depth_choices.size();
  const std::size_t K = folds.size();
  // scores[(e * D + d) * K + k]
  std::vector<double> scores(grid.size() * K, 0.0);
  const std::vector<ClassId> rare{1, dataset.num_classes};

  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t k = 0; k < K; ++k) {
      gbrt::HyperParams p = fixed;
      p.max_depth = grid.max_depth_choices[d];
      p.n_estimators = max_rounds;
      // Boosting is sequential, so the first r rounds of a longer run are
      // exactly the model trained for r rounds.
      const gbrt::GbrtModel full =
          gbrt::train(train_sets[k], p, {options.workers, options.kernels}).model;
      for (std::size_t e = 0; e < grid.n_estimators_choices.size(); ++e) {
        const auto model =
            full.truncated(static_cast<std::size_t>(grid.n_estimators_choices[e]));
        const auto predicted = model.predict_class(valid_sets[k].features, options.workers);
        const auto cm = confusion(valid_sets[k].targets, predicted, dataset.num_classes);
        scores[(e * D + d) * K + k] = compute_metrics(cm, rare).overall_f1;
      }
    }
  }

  for (std::size_t e = 0; e < grid.n_estimators_choices.size(); ++e) {
    for (std::size_t d = 0; d < D; ++d) {
      GridRow row;
      row.params = fixed;
      row.params.n_estimators = grid.n_estimators_choices[e];
      row.params.max_depth = grid.max_depth_choices[d];
      const auto first = scores.begin() + static_cast<std::ptrdiff_t>((e * D + d) * K);
      row.fold_scores.assign(first, first + static_cast<std::ptrdiff_t>(K));
      row.mean_score = mean(row.fold_scores);
      result.table.push_back(std::move(row));
    }
  }

  const auto preferred = [](const GridRow& a, const GridRow& b) {
    if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
    if (a.params.n_estimators != b.params.n_estimators) {
      return a.params.n_estimators < b.params.n_estimators;
    }
    return a.params.max_depth < b.params.max_depth;
  };
  for (std::size_t i = 1; i < result.table.size(); ++i) {
    if (preferred(result.table[i], result.table[result.best_index])) result.best_index = i;
  }
  result.best = result.table[result.best_index].params;
  return result;
}

nlohmann::json to_json(const GridSearchResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const GridRow& r : result.table) {
    rows.push_back({{"n_estimators", r.params.n_estimators},
                    {"max_depth", r.params.max_depth},
                    {"fold_scores", r.fold_scores},
                    {"mean_macro_f1", r.mean_score}});
  }
  return {{"criterion", "mean validation macro-F1"},
          {"best", gbrt::to_json(result.best)},
          {"best_index", result.best_index},
          {"table", rows},
          {"warnings", result.warnings}};
}

std::string format_grid_table(const GridSearchResult& result) {
  std::ostringstream os;
  os << std::left << std::setw(14) << "nEstimators" << std::setw(10) << "maxDepth";
  const std::size_t K = result.table.empty() ? 0 : result.table.front().fold_scores.size();
  for (std::size_t k = 0; k < K; ++k) os << std::setw(10) << ("fold" + std::to_string(k + 1));
  os << "mean\n";
  os << std::fixed << std::setprecision(4);
  for (std::size_t i = 0; i < result.table.size(); ++i) {
    const GridRow& r = result.table[i];
    os << std::left << std::setw(14) << r.params.n_estimators << std::setw(10) << r.params.max_depth;
    for (double s : r.fold_scores) os << std::setw(10) << s;
    os << r.mean_score << (i == result.best_index ? "  *" : "") << '\n';
  }
  return os.str();
}

}  // namespace windramp
