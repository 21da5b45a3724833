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

// Reference predictors: persistence of the last observed ramp class and the
// modal training class.

#include <cstdint>
#include <span>
#include <vector>

#include "windramp/ingest.hpp"
#include "windramp/labeling.hpp"

namespace windramp {

struct AlignedPredictions {
  std::vector<std::int64_t> anchors;  // timestamp t of each prediction
  std::vector<ClassId> truth;         // class of w(t+S) - w(t)
  std::vector<ClassId> predicted;     // class of w(t) - w(t-S)
};

// Anchors are the build_dataset anchors of the same series and horizon that
// also have a full preceding S-step window: t in [start + max(L-1, S), end - S]
// per segment.
AlignedPredictions persistence_predict(const WindPowerSeries& series, const HorizonSpec& horizon,
                                       const ThresholdSet& thresholds);

// Persistence for the rows of a labeled dataset using each row's own lag
// window: class of lag_{L-1} - lag_{L-1-S}. Requires lag_count > S.
std::vector<ClassId> persistence_from_features(const LabeledDataset& dataset);

// Constant prediction of the modal training class, ties toward the lower id.
std::vector<ClassId> majority_predict(std::span<const ClassId> train_targets, std::size_t n_test);

}  // namespace windramp
