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

// Ramp labeling: S-step power differences, threshold classes and
// lag-window datasets.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "windramp/ingest.hpp"
#include "windramp/matrix.hpp"

namespace windramp {

// 1 = most severe down-ramp, num_classes = most severe up-ramp.
using ClassId = std::int32_t;

// Ordered ramp thresholds T_1 < ... < T_m (MW). They induce 2(m+1) classes
// over the intervals split at -T_m, ..., -T_1, 0, T_1, ..., T_m. A value on a
// boundary belongs to the interval above it.
class ThresholdSet {
 public:
  ThresholdSet() : ThresholdSet(std::vector<double>{1.0}) {}
  explicit ThresholdSet(std::vector<double> thresholds_mw);

  // Single threshold at `fraction` of the rated capacity, fraction in (0, 1].
  static ThresholdSet from_capacity_fraction(double rated_capacity_mw, double fraction);

  std::span<const double> thresholds_mw() const noexcept { return thresholds_; }
  int num_classes() const noexcept { return 2 * (static_cast<int>(thresholds_.size()) + 1); }
  // Ascending boundaries -T_m .. -T_1, 0, T_1 .. T_m.
  std::span<const double> boundaries() const noexcept { return boundaries_; }
  // Severe classes: the lowest and highest class id.
  std::vector<ClassId> rare_classes() const { return {1, num_classes()}; }

  friend bool operator==(const ThresholdSet& a, const ThresholdSet& b) {
    return a.thresholds_ == b.thresholds_;
  }

 private:
  std::vector<double> thresholds_;
  std::vector<double> boundaries_;
};

struct RampClass {
  ClassId id = 0;
  bool rare = false;
};

struct HorizonSpec {
  int steps_ahead = 1;  // S
  int lag_count = 36;   // L

  void validate() const;
  friend bool operator==(const HorizonSpec&, const HorizonSpec&) = default;
};

struct DeltaPoint {
  std::int64_t timestamp = 0;  // timestamp of the later point
  double delta = 0.0;
};

struct DiffResult {
  std::vector<DeltaPoint> deltas;
  std::size_t segments_skipped = 0;  // segments not longer than the step
};

// dw(t) = w(t) - w(t - step * resolution), never across a segment gap.
DiffResult diff_series(const WindPowerSeries& series, int step);

RampClass assign_class(double delta_mw, const ThresholdSet& thresholds);

// Vectorized assign_class over many deltas. Throws DataError on non-finite input.
std::vector<ClassId> assign_classes(std::span<const double> deltas, const ThresholdSet& thresholds);

// Rows are lag windows (w(t-L+1), ..., w(t)) with the class of
// w(t+S) - w(t) as target. `anchors` holds each row's timestamp t.
struct LabeledDataset {
  DenseMatrix features;
  std::vector<ClassId> targets;
  std::vector<std::int64_t> anchors;
  HorizonSpec horizon;
  ThresholdSet thresholds;
  int num_classes = 4;

  std::size_t size() const noexcept { return targets.size(); }
  bool empty() const noexcept { return targets.empty(); }
  LabeledDataset subset(std::span<const std::size_t> rows) const;
  // Checks shape consistency, class-id range and feature finiteness.
  void validate() const;
};

LabeledDataset build_dataset(const WindPowerSeries& series, const HorizonSpec& horizon,
                             const ThresholdSet& thresholds);

struct ClassDistribution {
  std::vector<std::size_t> counts;  // index c-1 holds class c
  std::vector<double> percentages;
  std::size_t total = 0;

  double rare_fraction(std::span<const ClassId> rare_classes) const;
};

ClassDistribution class_distribution(std::span<const ClassId> targets, int num_classes);
nlohmann::json to_json(const ClassDistribution& distribution);
// "Class | Number of examples | Percentage" table.
std::string format_distribution_table(const ClassDistribution& distribution,
                                      const std::string& title);

nlohmann::json to_json(const ThresholdSet& thresholds);
nlohmann::json to_json(const HorizonSpec& horizon);
ThresholdSet thresholds_from_json(const nlohmann::json& j);
HorizonSpec horizon_from_json(const nlohmann::json& j);

// Columnar file: lag_0..lag_{L-1},target. The sidecar JSON carries horizon,
// thresholds, class count and anchors, plus any caller-provided fields.
void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& csv_path,
                  const std::filesystem::path& meta_path, const nlohmann::json& extra = {});
// Returns the dataset and the full sidecar document.
std::pair<LabeledDataset, nlohmann::json> load_dataset(const std::filesystem::path& csv_path,
                                                       const std::filesystem::path& meta_path);

void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset);

}  // namespace windramp
