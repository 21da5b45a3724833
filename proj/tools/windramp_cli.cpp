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

// windramp: command-line front end for the ramp classification pipeline.
//
//   windramp prepare      --config run.json
//   windramp train        --config run.json [--grid default]
//   windramp evaluate     --config run.json
//   windramp distribution --data series.csv --capacity-mw 100
//   windramp predict      --model out/models/h1.json < rows.csv

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "windramp/error.hpp"
#include "windramp/pipeline.hpp"

namespace {

using windramp::PipelineConfig;

struct Overrides {
  std::string config;
  std::string data;
  std::optional<double> capacity_mw;
  std::optional<double> threshold_fraction;
  std::optional<double> threshold_mw;
  std::string horizons;
  std::optional<int> lags;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> grid;
  std::string out;
  std::string timestamp_column;
  std::string power_column;
  std::optional<int> resolution_s;
  std::string gap_policy;
  std::optional<int> n_estimators;
  std::optional<int> max_depth;
  std::optional<double> test_fraction;
};

void add_pipeline_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--data", o.data, "input CSV series");
  cmd->add_option("--capacity-mw", o.capacity_mw, "rated capacity in MW");
  cmd->add_option("--threshold-fraction", o.threshold_fraction, "ramp threshold as a fraction of capacity");
  cmd->add_option("--threshold-mw", o.threshold_mw, "ramp threshold in MW");
  cmd->add_option("--horizons", o.horizons, "comma-separated steps ahead, e.g. 1,2,3");
  cmd->add_option("--lags", o.lags, "lag window length L");
  cmd->add_option("--seed", o.seed, "seed for splits and folds");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  cmd->add_option("--grid", o.grid, "hyper-parameter grid: default | none | N,..:D,..[:folds]");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--timestamp-column", o.timestamp_column, "timestamp column name");
  cmd->add_option("--power-column", o.power_column, "power column name");
  cmd->add_option("--resolution-s", o.resolution_s, "sampling resolution in seconds");
  cmd->add_option("--gap-policy", o.gap_policy, "split | error");
  cmd->add_option("--n-estimators", o.n_estimators, "boosting rounds");
  cmd->add_option("--max-depth", o.max_depth, "maximum tree depth");
  cmd->add_option("--test-fraction", o.test_fraction, "held-out fraction");
}

PipelineConfig resolve_config(const Overrides& o) {
  PipelineConfig c = o.config.empty() ? PipelineConfig{} : windramp::load_config(o.config);
  if (!o.data.empty()) c.data_path = o.data;
  if (o.capacity_mw) c.load.rated_capacity_mw = *o.capacity_mw;
  if (o.threshold_fraction) {
    c.threshold_fraction = *o.threshold_fraction;
    c.threshold_mw.reset();
  }
  if (o.threshold_mw) c.threshold_mw = *o.threshold_mw;
  if (!o.horizons.empty()) c.horizons = windramp::parse_int_list(o.horizons);
  if (o.lags) c.lag_count = *o.lags;
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.grid) c.grid = windramp::parse_grid(*o.grid);
  if (!o.out.empty()) c.output_dir = o.out;
  if (!o.timestamp_column.empty()) c.load.schema.timestamp_column = o.timestamp_column;
  if (!o.power_column.empty()) c.load.schema.power_column = o.power_column;
  if (o.resolution_s) c.load.resolution_s = *o.resolution_s;
  if (!o.gap_policy.empty()) c.load.gap_policy = windramp::parse_gap_policy(o.gap_policy);
  if (o.n_estimators) c.hyperparams.n_estimators = *o.n_estimators;
  if (o.max_depth) c.hyperparams.max_depth = *o.max_depth;
  if (o.test_fraction) c.test_fraction = *o.test_fraction;
  c.validate();
  return c;
}

int report_error(windramp::ErrorKind kind, int code, const std::string& message) {
  const char* name = kind == windramp::ErrorKind::kConfig ? "config"
                     : kind == windramp::ErrorKind::kData ? "data"
                                                          : "training";
  nlohmann::json j = {{"error", {{"kind", name}, {"exit_code", code}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-class wind power ramp classification with gradient boosted trees"};
  app.require_subcommand(1);
  Overrides o;

  auto* prepare = app.add_subcommand("prepare", "load a series, label ramps and write per-horizon datasets");
  auto* train = app.add_subcommand("train", "fit one model per horizon on the training split");
  auto* evaluate = app.add_subcommand("evaluate", "score models and baselines on the held-out split");
  auto* distribution = app.add_subcommand("distribution", "print ramp class distributions");
  for (auto* cmd : {prepare, train, evaluate, distribution}) add_pipeline_options(cmd, o);
  bool json_out = false;
  distribution->add_flag("--json", json_out, "print the distribution as JSON");

  auto* predict = app.add_subcommand("predict", "classify lag windows read from a file or stdin");
  std::string model_path;
  std::string input_path;
  windramp::PredictOptions predict_options;
  predict->add_option("--model", model_path, "model file")->required();
  predict->add_option("--input", input_path, "input rows (default: stdin)");
  predict->add_flag("--window", predict_options.raw_window, "rows are raw series windows; use the last L values");
  predict->add_option("--workers", predict_options.workers, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return report_error(windramp::ErrorKind::kConfig, 2, e.what());
  }

  try {
    if (*predict) {
      const auto model = windramp::gbrt::load_model(model_path);
      std::size_t rows = 0;
      if (input_path.empty()) {
        rows = windramp::cmd_predict(model, std::cin, std::cout, predict_options);
      } else {
        std::ifstream in(input_path);
        if (!in) throw windramp::DataError("cannot open input '" + input_path + "'");
        rows = windramp::cmd_predict(model, in, std::cout, predict_options);
      }
      std::cerr << "predicted " << rows << " rows\n";
      return 0;
    }
    const PipelineConfig config = resolve_config(o);
    if (*prepare) {
      const auto result = windramp::cmd_prepare(config);
      std::cout << "read " << result.load.rows_read << " rows, dropped " << result.load.rows_dropped
                << ", " << result.load.segments << " segment(s)\n";
      for (const auto& f : result.dataset_files) std::cout << "wrote " << f.string() << '\n';
    } else if (*train) {
      const auto summary = windramp::cmd_train(config);
      for (const auto& f : summary.model_files) std::cout << "wrote " << f.string() << '\n';
    } else if (*evaluate) {
      std::cout << windramp::cmd_evaluate(config).text;
    } else if (*distribution) {
      if (json_out) {
        std::ostringstream discard;
        std::cout << windramp::cmd_distribution(config, discard).dump(2) << '\n';
      } else {
        windramp::cmd_distribution(config, std::cout);
      }
    }
  } catch (const windramp::Error& e) {
    return report_error(e.kind(), e.exit_code(), e.what());
  } catch (const std::exception& e) {
    return report_error(windramp::ErrorKind::kTraining, 4, e.what());
  }
  return 0;
}
