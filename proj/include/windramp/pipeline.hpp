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

// Batch pipeline behind the command-line verbs. Output layout under the
// configured directory:
//
//   datasets/h<S>.csv, datasets/h<S>.meta.json   labeled data + split
//   models/h<S>.json                             trained model per horizon
//   reports/...                                  distribution, grid, evaluation

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "windramp/evaluation.hpp"
#include "windramp/gbrt.hpp"
#include "windramp/ingest.hpp"
#include "windramp/labeling.hpp"

namespace windramp {

inline constexpr int kConfigVersion = 1;

struct PipelineConfig {
  std::filesystem::path data_path;
  LoadOptions load;
  std::optional<double> threshold_fraction = 0.5;
  std::optional<double> threshold_mw;  // takes precedence over the fraction
  std::vector<int> horizons{1, 2, 3, 4, 5, 6};
  int lag_count = 36;
  gbrt::HyperParams hyperparams;
  std::optional<ParamGrid> grid;
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  int workers = 0;
  std::filesystem::path output_dir = "windramp-out";

  void validate() const;  // throws ConfigError
  ThresholdSet thresholds() const;
  HorizonSpec horizon(int steps_ahead) const { return {steps_ahead, lag_count}; }
};

PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig defaults = {});
nlohmann::json to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

// "default" = {50,100,200} x {2,4,6}, 3 folds; "none" = no grid; otherwise
// "<n_estimators list>:<max_depth list>[:<folds>]", e.g. "50,100:2,4:3".
std::optional<ParamGrid> parse_grid(const std::string& spec);
std::vector<int> parse_int_list(const std::string& text);

struct PathLayout {
  std::filesystem::path root;
  std::filesystem::path dataset_csv(int s) const;
  std::filesystem::path dataset_meta(int s) const;
  std::filesystem::path model(int s) const;
  std::filesystem::path reports() const { return root / "reports"; }
};

struct PrepareResult {
  LoadReport load;
  std::vector<ClassDistribution> distributions;  // per configured horizon
  std::vector<std::filesystem::path> dataset_files;
};

PrepareResult cmd_prepare(const PipelineConfig& config);

// Distribution tables for every horizon without writing datasets.
nlohmann::json cmd_distribution(const PipelineConfig& config, std::ostream& text_out);

struct TrainSummary {
  std::vector<std::filesystem::path> model_files;
  std::vector<GridSearchResult> grids;  // empty without a grid
};

TrainSummary cmd_train(const PipelineConfig& config);

struct PredictorTiming {
  std::string predictor;
  double seconds_per_example = 0.0;
};

struct EvaluationSummary {
  nlohmann::json report;  // deterministic metrics only
  std::vector<PredictorTiming> timings;
  std::string text;
};

EvaluationSummary cmd_evaluate(const PipelineConfig& config);

struct PredictOptions {
  bool raw_window = false;  // each line is a series window; its last L values are used
  int workers = 1;
};

// Reads one comma-separated row per line (a header starting with "lag_" is
// skipped) and writes "class,p_1,...,p_C" per row. Returns the row count.
std::size_t cmd_predict(const gbrt::GbrtModel& model, std::istream& in, std::ostream& out,
                        const PredictOptions& options = {});

}  // namespace windramp
