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

#include "windramp/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "text_util.hpp"
#include "windramp/baselines.hpp"
#include "windramp/error.hpp"

namespace windramp {
namespace fs = std::filesystem;

void PipelineConfig::validate() const {
  if (data_path.empty()) throw ConfigError("no input data path configured");
  if (!(load.rated_capacity_mw > 0.0)) throw ConfigError("rated capacity (MW) must be configured and > 0");
  if (load.resolution_s <= 0) throw ConfigError("resolution_s must be > 0");
  if (!threshold_mw && !threshold_fraction) throw ConfigError("no ramp threshold configured");
  if (threshold_fraction && !threshold_mw && !(*threshold_fraction > 0.0 && *threshold_fraction <= 1.0)) {
    throw ConfigError("threshold fraction must lie in (0, 1]");
  }
  if (horizons.empty()) throw ConfigError("at least one horizon is required");
  if (std::set<int>(horizons.begin(), horizons.end()).size() != horizons.size()) {
    throw ConfigError("horizons must be distinct");
  }
  for (int s : horizons) horizon(s).validate();
  hyperparams.validate();
  if (grid) grid->validate();
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("test_fraction must lie in (0, 1)");
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

ThresholdSet PipelineConfig::thresholds() const {
  if (threshold_mw) return ThresholdSet({*threshold_mw});
  return ThresholdSet::from_capacity_fraction(load.rated_capacity_mw, threshold_fraction.value_or(0.5));
}

PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig c) {
  try {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    if (!j.contains("version")) throw ConfigError("configuration lacks a version field");
    const int version = j.at("version").get<int>();
    if (version != kConfigVersion) {
      throw ConfigError("unsupported configuration version " + std::to_string(version));
    }
    if (j.contains("data")) {
      const auto& d = j.at("data");
      if (d.contains("path")) c.data_path = d.at("path").get<std::string>();
      c.load.schema.timestamp_column = d.value("timestamp_column", c.load.schema.timestamp_column);
      c.load.schema.power_column = d.value("power_column", c.load.schema.power_column);
      const std::string delim = d.value("delimiter", std::string(1, c.load.schema.delimiter));
      if (delim.size() != 1) throw ConfigError("delimiter must be a single character");
      c.load.schema.delimiter = delim[0];
      c.load.resolution_s = d.value("resolution_s", c.load.resolution_s);
      c.load.rated_capacity_mw = d.value("rated_capacity_mw", c.load.rated_capacity_mw);
      if (d.contains("gap_policy")) c.load.gap_policy = parse_gap_policy(d.at("gap_policy").get<std::string>());
      c.load.site_id = d.value("site_id", c.load.site_id);
    }
    if (j.contains("threshold")) {
      const auto& t = j.at("threshold");
      if (t.contains("mw")) c.threshold_mw = t.at("mw").get<double>();
      if (t.contains("fraction")) c.threshold_fraction = t.at("fraction").get<double>();
    }
    if (j.contains("horizons")) c.horizons = j.at("horizons").get<std::vector<int>>();
    c.lag_count = j.value("lag_count", c.lag_count);
    if (j.contains("hyperparams")) c.hyperparams = gbrt::hyperparams_from_json(j.at("hyperparams"), c.hyperparams);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.is_null()) {
        c.grid.reset();
      } else if (g.is_string()) {
        c.grid = parse_grid(g.get<std::string>());
      } else {
        ParamGrid grid;
        grid.n_estimators_choices = g.value("n_estimators", grid.n_estimators_choices);
        grid.max_depth_choices = g.value("max_depth", grid.max_depth_choices);
        grid.folds = g.value("folds", grid.folds);
        c.grid = grid;
      }
    }
    c.test_fraction = j.value("test_fraction", c.test_fraction);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

nlohmann::json to_json(const PipelineConfig& c) {
  nlohmann::json threshold = nlohmann::json::object();
  if (c.threshold_mw) threshold["mw"] = *c.threshold_mw;
  if (c.threshold_fraction) threshold["fraction"] = *c.threshold_fraction;
  nlohmann::json grid = nullptr;
  if (c.grid) {
    grid = {{"n_estimators", c.grid->n_estimators_choices},
            {"max_depth", c.grid->max_depth_choices},
            {"folds", c.grid->folds}};
  }
  return {{"version", kConfigVersion},
          {"data",
           {{"path", c.data_path.string()},
            {"timestamp_column", c.load.schema.timestamp_column},
            {"power_column", c.load.schema.power_column},
            {"delimiter", std::string(1, c.load.schema.delimiter)},
            {"resolution_s", c.load.resolution_s},
            {"rated_capacity_mw", c.load.rated_capacity_mw},
            {"gap_policy", c.load.gap_policy == GapPolicy::kSplit ? "split" : "error"},
            {"site_id", c.load.site_id}}},
          {"threshold", threshold},
          {"horizons", c.horizons},
          {"lag_count", c.lag_count},
          {"hyperparams", gbrt::to_json(c.hyperparams)},
          {"grid", grid},
          {"test_fraction", c.test_fraction},
          {"seed", c.seed},
          {"workers", c.workers},
          {"output_dir", c.output_dir.string()}};
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("configuration '" + path.string() + "' is not valid JSON: " + e.what());
  }
  PipelineConfig c = config_from_json(j);
  // Relative data paths are relative to the configuration file.
  if (!c.data_path.empty() && c.data_path.is_relative()) {
    c.data_path = path.parent_path() / c.data_path;
  }
  return c;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (std::string_view field : text::split(text, ',')) {
    const auto v = text::parse_int(field);
    if (!v) throw ConfigError("expected a comma-separated integer list, got '" + text + "'");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

std::optional<ParamGrid> parse_grid(const std::string& spec) {
  if (spec == "none" || spec.empty()) return std::nullopt;
  if (spec == "default") return ParamGrid{};
  const auto parts = text::split(spec, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    throw ConfigError("grid must be 'default', 'none' or '<n_estimators>:<max_depth>[:<folds>]'");
  }
  ParamGrid g;
  g.n_estimators_choices = parse_int_list(std::string(parts[0]));
  g.max_depth_choices = parse_int_list(std::string(parts[1]));
  if (parts.size() == 3) {
    const auto folds = text::parse_int(parts[2]);
    if (!folds) throw ConfigError("grid folds must be an integer");
    g.folds = static_cast<int>(*folds);
  }
  g.validate();
  return g;
}

fs::path PathLayout::dataset_csv(int s) const { return root / "datasets" / ("h" + std::to_string(s) + ".csv"); }
fs::path PathLayout::dataset_meta(int s) const {
  return root / "datasets" / ("h" + std::to_string(s) + ".meta.json");
}
fs::path PathLayout::model(int s) const { return root / "models" / ("h" + std::to_string(s) + ".json"); }

namespace {

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::uint64_t split_seed(std::uint64_t seed, int steps_ahead) {
  return seed + static_cast<std::uint64_t>(steps_ahead);
}

struct SplitDataset {
  LabeledDataset train;
  LabeledDataset test;
};

SplitDataset load_split(const PathLayout& paths, int s) {
  auto [ds, meta] = load_dataset(paths.dataset_csv(s), paths.dataset_meta(s));
  std::vector<std::size_t> test_rows;
  try {
    test_rows = meta.at("split").at("test_indices").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("dataset metadata for horizon " + std::to_string(s) + " lacks a split: " + e.what());
  }
  std::vector<bool> is_test(ds.size(), false);
  for (std::size_t i : test_rows) {
    if (i >= ds.size()) throw DataError("test index out of range in dataset metadata");
    is_test[i] = true;
  }
  std::vector<std::size_t> train_rows;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!is_test[i]) train_rows.push_back(i);
  }
  return {ds.subset(train_rows), ds.subset(test_rows)};
}

template <typename Fn>
double seconds_per_example(Fn&& fn, std::size_t examples) {
  using clock = std::chrono::steady_clock;
  constexpr auto kMinimum = std::chrono::milliseconds(5);
  std::size_t reps = 0;
  const auto start = clock::now();
  auto elapsed = clock::duration::zero();
  do {
    fn();
    ++reps;
    elapsed = clock::now() - start;
  } while (elapsed < kMinimum);
  const double seconds = std::chrono::duration<double>(elapsed).count();
  return seconds / static_cast<double>(reps * std::max<std::size_t>(examples, 1));
}

}  // namespace

PrepareResult cmd_prepare(const PipelineConfig& config) {
  config.validate();
  const ThresholdSet thresholds = config.thresholds();
  LoadedSeries loaded = load_series(config.data_path, config.load);
  const PathLayout paths{config.output_dir};
  ensure_dir(paths.root / "datasets");
  ensure_dir(paths.reports());

  PrepareResult result;
  result.load = loaded.report;
  nlohmann::json dist_json = nlohmann::json::array();
  std::ostringstream dist_text;
  for (int s : config.horizons) {
    const LabeledDataset ds = build_dataset(loaded.series, config.horizon(s), thresholds);
    const SplitIndices split = stratified_split(ds.targets, config.test_fraction, split_seed(config.seed, s));
    const nlohmann::json extra = {
        {"split",
         {{"seed", split_seed(config.seed, s)},
          {"test_fraction", config.test_fraction},
          {"test_indices", split.test},
          {"warnings", split.warnings}}},
        {"source",
         {{"site_id", loaded.series.site_id()},
          {"rows_read", loaded.report.rows_read},
          {"rows_dropped", loaded.report.rows_dropped},
          {"rows_gap_filled", loaded.report.rows_gap_filled},
          {"segments", loaded.report.segments},
          {"resolution_s", loaded.series.resolution_s()},
          {"rated_capacity_mw", loaded.series.rated_capacity_mw()}}}};
    save_dataset(ds, paths.dataset_csv(s), paths.dataset_meta(s), extra);
    result.dataset_files.push_back(paths.dataset_csv(s));

    ClassDistribution dist = class_distribution(ds.targets, ds.num_classes);
    nlohmann::json entry = to_json(dist);
    entry["steps_ahead"] = s;
    entry["rare_fraction"] = dist.rare_fraction(thresholds.rare_classes());
    dist_json.push_back(std::move(entry));
    dist_text << format_distribution_table(
                     dist, "Horizon S=" + std::to_string(s) + " (" +
                               std::to_string(s * config.load.resolution_s / 60) + " min)")
              << '\n';
    result.distributions.push_back(std::move(dist));
  }
  write_text(paths.reports() / "distribution.json",
             nlohmann::json{{"thresholds", to_json(thresholds)}, {"horizons", dist_json}}.dump(2) + "\n");
  write_text(paths.reports() / "distribution.txt", dist_text.str());
  return result;
}

nlohmann::json cmd_distribution(const PipelineConfig& config, std::ostream& text_out) {
  config.validate();
  const ThresholdSet thresholds = config.thresholds();
  const LoadedSeries loaded = load_series(config.data_path, config.load);
  const SeriesStats stats = series_stats(loaded.series);
  nlohmann::json horizons = nlohmann::json::array();
  text_out << "Site " << (loaded.series.site_id().empty() ? "-" : loaded.series.site_id()) << ": "
           << stats.count << " points, threshold "
           << text::format_double(thresholds.thresholds_mw().front()) << " MW\n\n";
  for (int s : config.horizons) {
    const LabeledDataset ds = build_dataset(loaded.series, config.horizon(s), thresholds);
    const ClassDistribution dist = class_distribution(ds.targets, ds.num_classes);
    nlohmann::json entry = to_json(dist);
    entry["steps_ahead"] = s;
    entry["rare_fraction"] = dist.rare_fraction(thresholds.rare_classes());
    horizons.push_back(std::move(entry));
    text_out << format_distribution_table(dist, "Horizon S=" + std::to_string(s)) << '\n';
  }
  return {{"series", to_json(stats)}, {"thresholds", to_json(thresholds)}, {"horizons", horizons}};
}

TrainSummary cmd_train(const PipelineConfig& config) {
  config.validate();
  const PathLayout paths{config.output_dir};
  ensure_dir(paths.root / "models");
  ensure_dir(paths.reports());
  TrainSummary summary;
  nlohmann::json train_report = nlohmann::json::array();
  for (int s : config.horizons) {
    const SplitDataset data = load_split(paths, s);
    gbrt::HyperParams params = config.hyperparams;
    if (config.grid) {
      GridSearchResult grid = grid_search(data.train, *config.grid, config.hyperparams, config.seed,
                                          {config.workers, nullptr});
      params = grid.best;
      const std::string stem = "grid_h" + std::to_string(s);
      write_text(paths.reports() / (stem + ".json"), to_json(grid).dump(2) + "\n");
      write_text(paths.reports() / (stem + ".txt"), format_grid_table(grid));
      summary.grids.push_back(std::move(grid));
    }
    const gbrt::TrainResult trained = gbrt::train(data.train, params, {config.workers, nullptr});
    gbrt::save_model(trained.model, paths.model(s).string());
    summary.model_files.push_back(paths.model(s));
    train_report.push_back({{"steps_ahead", s},
                            {"rows", data.train.size()},
                            {"hyperparams", gbrt::to_json(params)},
                            {"objective_initial", trained.objective_trace.front()},
                            {"objective_final", trained.objective_trace.back()}});
  }
  write_text(paths.reports() / "train.json", train_report.dump(2) + "\n");
  return summary;
}

namespace {

struct PredictorRun {
  std::string key;
  std::string title;
  std::vector<MetricsReport> per_horizon;
  std::vector<double> seconds;
};

std::string fixed(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

EvaluationSummary cmd_evaluate(const PipelineConfig& config) {
  config.validate();
  const PathLayout paths{config.output_dir};
  ensure_dir(paths.reports());
  const auto rare = config.thresholds().rare_classes();

  std::vector<PredictorRun> runs{
      {"gbrt", "Gradient Boosted Regression Trees (GBRT) model", {}, {}},
      {"persistence", "Persistence Benchmark", {}, {}},
      {"majority", "Majority-class Baseline", {}, {}}};

  for (int s : config.horizons) {
    if (!fs::exists(paths.model(s))) {
      throw DataError("missing model for horizon " + std::to_string(s) + " at '" +
                      paths.model(s).string() + "'; run train first");
    }
    const SplitDataset data = load_split(paths, s);
    const gbrt::GbrtModel model = gbrt::load_model(paths.model(s).string());
    const LabeledDataset& test = data.test;
    if (test.empty()) throw DataError("empty test split for horizon " + std::to_string(s));

    std::vector<ClassId> gbrt_pred;
    std::vector<ClassId> persist_pred;
    std::vector<ClassId> majority_pred;
    const double t_gbrt = seconds_per_example(
        [&] { gbrt_pred = model.predict_class(test.features, config.workers); }, test.size());
    const double t_persist =
        seconds_per_example([&] { persist_pred = persistence_from_features(test); }, test.size());
    const double t_majority = seconds_per_example(
        [&] { majority_pred = majority_predict(data.train.targets, test.size()); }, test.size());

    const std::vector<ClassId>* preds[] = {&gbrt_pred, &persist_pred, &majority_pred};
    const double times[] = {t_gbrt, t_persist, t_majority};
    for (std::size_t r = 0; r < runs.size(); ++r) {
      MetricsReport m = compute_metrics(confusion(test.targets, *preds[r], test.num_classes), rare);
      m.horizon = test.horizon;
      runs[r].per_horizon.push_back(std::move(m));
      runs[r].seconds.push_back(times[r]);
    }
  }

  EvaluationSummary summary;
  nlohmann::json predictors = nlohmann::json::array();
  nlohmann::json timing = nlohmann::json::array();
  std::ostringstream text;
  text << "Ramp class prediction, horizons";
  for (int s : config.horizons) text << ' ' << s * config.load.resolution_s / 60 << "min";
  text << "\n\n";
  for (const PredictorRun& run : runs) {
    const MultiHorizonReport agg = aggregate_horizons(run.per_horizon);
    nlohmann::json entry = to_json(agg);
    entry["predictor"] = run.key;
    predictors.push_back(std::move(entry));

    double mean_seconds = 0.0;
    for (double t : run.seconds) mean_seconds += t;
    mean_seconds /= static_cast<double>(run.seconds.size());
    summary.timings.push_back({run.key, mean_seconds});
    timing.push_back({{"predictor", run.key},
                      {"seconds_per_example", mean_seconds},
                      {"per_horizon_seconds_per_example", run.seconds}});

    text << run.title << '\n';
    text << std::left << std::setw(10) << "Accuracy" << std::setw(20) << "F1 score(overall)"
         << std::setw(24) << "F1 score (rare events)" << "Test time/example (s)\n";
    text << std::left << std::setw(10) << fixed(agg.accuracy, 2) << std::setw(20)
         << fixed(agg.overall_f1, 2) << std::setw(24) << fixed(agg.rare_f1, 2) << std::scientific
         << std::setprecision(3) << mean_seconds << '\n';
    text << "  per horizon:  S   accuracy  overall_f1  rare_f1\n";
    for (std::size_t h = 0; h < run.per_horizon.size(); ++h) {
      const MetricsReport& m = run.per_horizon[h];
      text << "               " << std::left << std::setw(4) << m.horizon->steps_ahead << std::setw(10)
           << fixed(m.accuracy, 4) << std::setw(12) << fixed(m.overall_f1, 4) << fixed(m.rare_f1, 4)
           << '\n';
    }
    text << "  pooled accuracy: " << fixed(agg.pooled_accuracy, 4) << "\n\n";
  }
  summary.report = {{"horizons", config.horizons},
                    {"rare_classes", rare},
                    {"predictors", predictors}};
  summary.text = text.str();
  write_text(paths.reports() / "evaluation.json", summary.report.dump(2) + "\n");
  write_text(paths.reports() / "timing.json", timing.dump(2) + "\n");
  write_text(paths.reports() / "evaluation.txt", summary.text);
  return summary;
}

std::size_t cmd_predict(const gbrt::GbrtModel& model, std::istream& in, std::ostream& out,
                        const PredictOptions& options) {
  const auto L = static_cast<std::size_t>(model.num_features());
  DenseMatrix rows(0, L);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, ',');
    if (fields.front().starts_with("lag_")) continue;
    std::vector<double> values;
    values.reserve(fields.size());
    for (std::string_view f : fields) {
      const auto v = text::parse_double(f);
      if (!v || !std::isfinite(*v)) {
        throw DataError("non-numeric value '" + std::string(f) + "' at input line " + std::to_string(line_no));
      }
      values.push_back(*v);
    }
    if (options.raw_window ? values.size() < L : values.size() != L) {
      throw DataError("input line " + std::to_string(line_no) + " has " + std::to_string(values.size()) +
                      " values; the model expects " + (options.raw_window ? "at least " : "") +
                      std::to_string(L));
    }
    rows.append_row(std::span<const double>(values).last(L));
  }
  const DenseMatrix proba = model.predict_proba(rows, options.workers);
  for (std::size_t i = 0; i < proba.rows(); ++i) {
    out << gbrt::argmax_class(proba.row(i));
    for (double p : proba.row(i)) out << ',' << text::format_double(p);
    out << '\n';
  }
  return proba.rows();
}

}  // namespace windramp
