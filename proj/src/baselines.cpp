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

#include "windramp/baselines.hpp"

#include <algorithm>
#include <map>

#include "windramp/error.hpp"

namespace windramp {

AlignedPredictions persistence_predict(const WindPowerSeries& series, const HorizonSpec& horizon,
                                       const ThresholdSet& thresholds) {
  horizon.validate();
  const auto L = static_cast<std::size_t>(horizon.lag_count);
  const auto S = static_cast<std::size_t>(horizon.steps_ahead);
  const std::size_t lead = std::max(L - 1, S);

  AlignedPredictions out;
  std::vector<double> future;
  std::vector<double> past;
  for (const Segment& seg : series.segments()) {
    for (std::size_t t = seg.begin + lead; t + S < seg.end; ++t) {
      out.anchors.push_back(series.points()[t].timestamp);
      future.push_back(series.power(t + S) - series.power(t));
      past.push_back(series.power(t) - series.power(t - S));
    }
  }
  if (out.anchors.empty()) {
    throw DataError("series too short for persistence at horizon " + std::to_string(S));
  }
  out.truth = assign_classes(future, thresholds);
  out.predicted = assign_classes(past, thresholds);
  return out;
}

std::vector<ClassId> persistence_from_features(const LabeledDataset& dataset) {
  const auto L = dataset.features.cols();
  const auto S = static_cast<std::size_t>(dataset.horizon.steps_ahead);
  if (L <= S) {
    throw ConfigError("persistence from lag features needs lag_count > steps_ahead (" +
                      std::to_string(L) + " <= " + std::to_string(S) + ")");
  }
  std::vector<double> past(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto row = dataset.features.row(i);
    past[i] = row[L - 1] - row[L - 1 - S];
  }
  return assign_classes(past, dataset.thresholds);
}

std::vector<ClassId> majority_predict(std::span<const ClassId> train_targets, std::size_t n_test) {
  if (train_targets.empty()) throw DataError("majority baseline needs training targets");
  std::map<ClassId, std::size_t> counts;
  for (ClassId c : train_targets) ++counts[c];
  ClassId mode = counts.begin()->first;
  std::size_t best = 0;
  for (const auto& [cls, n] : counts) {
    if (n > best) {
      best = n;
      mode = cls;
    }
  }
  return std::vector<ClassId>(n_test, mode);
}

}  // namespace windramp
