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

#include "windramp/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "text_util.hpp"
#include "windramp/error.hpp"
#include "windramp/kernels.hpp"

namespace windramp {

ThresholdSet::ThresholdSet(std::vector<double> thresholds_mw) : thresholds_(std::move(thresholds_mw)) {
  if (thresholds_.empty()) throw ConfigError("threshold set is empty");
  for (std::size_t i = 0; i < thresholds_.size(); ++i) {
    if (!(thresholds_[i] > 0.0) || !std::isfinite(thresholds_[i])) {
      throw ConfigError("thresholds must be positive finite MW values");
    }
    if (i > 0 && !(thresholds_[i] > thresholds_[i - 1])) {
      throw ConfigError("thresholds must be strictly increasing");
    }
  }
  boundaries_.reserve(2 * thresholds_.size() + 1);
  for (auto it = thresholds_.rbegin(); it != thresholds_.rend(); ++it) boundaries_.push_back(-*it);
  boundaries_.push_back(0.0);
  boundaries_.insert(boundaries_.end(), thresholds_.begin(), thresholds_.end());
}

ThresholdSet ThresholdSet::from_capacity_fraction(double rated_capacity_mw, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("threshold fraction must lie in (0, 1]");
  }
  if (!(rated_capacity_mw > 0.0) || !std::isfinite(rated_capacity_mw)) {
    throw ConfigError("rated capacity must be a positive finite number of MW");
  }
  return ThresholdSet({fraction * rated_capacity_mw});
}

void HorizonSpec::validate() const {
  if (steps_ahead < 1) throw ConfigError("steps_ahead must be >= 1");
  if (lag_count < 1) throw ConfigError("lag_count must be >= 1");
}

DiffResult diff_series(const WindPowerSeries& series, int step) {
  if (step < 1) throw ConfigError("difference step must be >= 1");
  const auto s = static_cast<std::size_t>(step);
  DiffResult result;
  for (const Segment& seg : series.segments()) {
    if (seg.size() <= s) {
      ++result.segments_skipped;
      continue;
    }
    for (std::size_t i = seg.begin + s; i < seg.end; ++i) {
      result.deltas.push_back({series.points()[i].timestamp, series.power(i) - series.power(i - s)});
    }
  }
  return result;
}

RampClass assign_class(double delta_mw, const ThresholdSet& thresholds) {
  if (!std::isfinite(delta_mw)) throw DataError("cannot classify a non-finite power change");
  ClassId id = 0;
  const auto bounds = thresholds.boundaries();
  kernels::scalar_kernels().count_boundaries(&delta_mw, 1, bounds.data(), bounds.size(), &id);
  return {id, id == 1 || id == thresholds.num_classes()};
}

std::vector<ClassId> assign_classes(std::span<const double> deltas, const ThresholdSet& thresholds) {
  for (double d : deltas) {
    if (!std::isfinite(d)) throw DataError("cannot classify a non-finite power change");
  }
  std::vector<ClassId> out(deltas.size());
  const auto bounds = thresholds.boundaries();
  kernels::active_kernels().count_boundaries(deltas.data(), deltas.size(), bounds.data(),
                                             bounds.size(), out.data());
  return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.horizon = horizon;
  out.thresholds = thresholds;
  out.num_classes = num_classes;
  std::vector<double> data;
  data.reserve(rows.size() * features.cols());
  out.targets.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto row = features.row(r);
    data.insert(data.end(), row.begin(), row.end());
    out.targets.push_back(targets[r]);
    if (!anchors.empty()) out.anchors.push_back(anchors[r]);
  }
  out.features = DenseMatrix(rows.size(), features.cols(), std::move(data));
  return out;
}

void LabeledDataset::validate() const {
  if (features.rows() != targets.size()) throw DataError("feature rows and targets differ in length");
  if (!anchors.empty() && anchors.size() != targets.size()) {
    throw DataError("anchor count differs from row count");
  }
  if (num_classes < 2) throw DataError("a dataset needs at least two classes");
  for (ClassId t : targets) {
    if (t < 1 || t > num_classes) throw DataError("target class " + std::to_string(t) + " out of range");
  }
  for (double v : features.data()) {
    if (!std::isfinite(v)) throw DataError("non-finite feature value");
  }
}

LabeledDataset build_dataset(const WindPowerSeries& series, const HorizonSpec& horizon,
                             const ThresholdSet& thresholds) {
  horizon.validate();
  const auto L = static_cast<std::size_t>(horizon.lag_count);
  const auto S = static_cast<std::size_t>(horizon.steps_ahead);

  LabeledDataset ds;
  ds.horizon = horizon;
  ds.thresholds = thresholds;
  ds.num_classes = thresholds.num_classes();

  std::vector<double> data;
  std::vector<double> deltas;
  for (const Segment& seg : series.segments()) {
    if (seg.size() < L + S) continue;
    for (std::size_t a = seg.begin + L - 1; a + S < seg.end; ++a) {
      for (std::size_t j = a + 1 - L; j <= a; ++j) data.push_back(series.power(j));
      deltas.push_back(series.power(a + S) - series.power(a));
      ds.anchors.push_back(series.points()[a].timestamp);
    }
  }
  if (deltas.empty()) {
    throw DataError("no segment has the " + std::to_string(L + S) +
                    " points needed for lag_count " + std::to_string(L) + " and horizon " +
                    std::to_string(S));
  }
  ds.features = DenseMatrix(deltas.size(), L, std::move(data));
  ds.targets = assign_classes(deltas, thresholds);
  return ds;
}

double ClassDistribution::rare_fraction(std::span<const ClassId> rare_classes) const {
  if (total == 0) return 0.0;
  std::size_t rare = 0;
  for (ClassId c : rare_classes) rare += counts.at(static_cast<std::size_t>(c - 1));
  return static_cast<double>(rare) / static_cast<double>(total);
}

ClassDistribution class_distribution(std::span<const ClassId> targets, int num_classes) {
  if (targets.empty()) throw DataError("class distribution of an empty dataset");
  ClassDistribution d;
  d.counts.assign(static_cast<std::size_t>(num_classes), 0);
  for (ClassId t : targets) {
    if (t < 1 || t > num_classes) throw DataError("target class " + std::to_string(t) + " out of range");
    ++d.counts[static_cast<std::size_t>(t - 1)];
  }
  d.total = targets.size();
  for (std::size_t c : d.counts) {
    d.percentages.push_back(100.0 * static_cast<double>(c) / static_cast<double>(d.total));
  }
  return d;
}

nlohmann::json to_json(const ClassDistribution& distribution) {
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t c = 0; c < distribution.counts.size(); ++c) {
    classes.push_back({{"class", c + 1},
                       {"count", distribution.counts[c]},
                       {"percentage", distribution.percentages[c]}});
  }
  return {{"total", distribution.total}, {"classes", classes}};
}

std::string format_distribution_table(const ClassDistribution& distribution,
                                      const std::string& title) {
  std::ostringstream os;
  os << title << '\n';
  os << std::left << std::setw(7) << "Class" << std::right << std::setw(20) << "Number of examples"
     << std::setw(12) << "Percentage" << '\n';
  for (std::size_t c = 0; c < distribution.counts.size(); ++c) {
    os << std::left << std::setw(7) << c + 1 << std::right << std::setw(20) << distribution.counts[c]
       << std::setw(12) << std::fixed << std::setprecision(2) << distribution.percentages[c] << '\n';
  }
  os << std::left << std::setw(7) << "Total" << std::right << std::setw(20) << distribution.total
     << '\n';
  return os.str();
}

nlohmann::json to_json(const ThresholdSet& thresholds) {
  return {{"thresholds_mw", std::vector<double>(thresholds.thresholds_mw().begin(),
                                                thresholds.thresholds_mw().end())}};
}

nlohmann::json to_json(const HorizonSpec& horizon) {
  return {{"steps_ahead", horizon.steps_ahead}, {"lag_count", horizon.lag_count}};
}

ThresholdSet thresholds_from_json(const nlohmann::json& j) {
  return ThresholdSet(j.at("thresholds_mw").get<std::vector<double>>());
}

HorizonSpec horizon_from_json(const nlohmann::json& j) {
  HorizonSpec h{j.at("steps_ahead").get<int>(), j.at("lag_count").get<int>()};
  h.validate();
  return h;
}

void write_dataset_csv(std::ostream& out, const LabeledDataset& dataset) {
  const std::size_t L = dataset.features.cols();
  for (std::size_t j = 0; j < L; ++j) out << "lag_" << j << ',';
  out << "target\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (double v : dataset.features.row(i)) out << text::format_double(v) << ',';
    out << dataset.targets[i] << '\n';
  }
}

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& csv_path,
                  const std::filesystem::path& meta_path, const nlohmann::json& extra) {
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw DataError("cannot write dataset file '" + csv_path.string() + "'");
    write_dataset_csv(out, dataset);
  }
  nlohmann::json meta = extra.is_object() ? extra : nlohmann::json::object();
  meta["format"] = "windramp-dataset";
  meta["version"] = 1;
  meta["rows"] = dataset.size();
  meta["num_classes"] = dataset.num_classes;
  meta["horizon"] = to_json(dataset.horizon);
  meta["thresholds"] = to_json(dataset.thresholds);
  meta["anchors"] = dataset.anchors;
  std::ofstream out(meta_path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset metadata '" + meta_path.string() + "'");
  out << meta.dump(2) << '\n';
}

std::pair<LabeledDataset, nlohmann::json> load_dataset(const std::filesystem::path& csv_path,
                                                       const std::filesystem::path& meta_path) {
  nlohmann::json meta;
  {
    std::ifstream in(meta_path);
    if (!in) throw DataError("cannot open dataset metadata '" + meta_path.string() + "'");
    try {
      meta = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("malformed dataset metadata '" + meta_path.string() + "': " + e.what());
    }
  }
  LabeledDataset ds;
  try {
    if (meta.at("version").get<int>() != 1) throw DataError("unsupported dataset metadata version");
    ds.horizon = horizon_from_json(meta.at("horizon"));
    ds.thresholds = thresholds_from_json(meta.at("thresholds"));
    ds.num_classes = meta.at("num_classes").get<int>();
    if (meta.contains("anchors")) ds.anchors = meta.at("anchors").get<std::vector<std::int64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed dataset metadata '" + meta_path.string() + "': " + e.what());
  }

  std::ifstream in(csv_path);
  if (!in) throw DataError("cannot open dataset file '" + csv_path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("dataset file '" + csv_path.string() + "' is empty");
  const auto header = text::split(line, ',');
  const std::size_t L = header.size() - 1;
  if (header.empty() || header.back() != "target" ||
      L != static_cast<std::size_t>(ds.horizon.lag_count)) {
    throw DataError("dataset header does not match lag_count " +
                    std::to_string(ds.horizon.lag_count));
  }
  std::vector<double> data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, ',');
    if (fields.size() != L + 1) {
      throw DataError("malformed dataset row at line " + std::to_string(line_no));
    }
    for (std::size_t j = 0; j < L; ++j) {
      const auto v = text::parse_double(fields[j]);
      if (!v) throw DataError("malformed dataset value at line " + std::to_string(line_no));
      data.push_back(*v);
    }
    const auto t = text::parse_int(fields[L]);
    if (!t) throw DataError("malformed dataset target at line " + std::to_string(line_no));
    ds.targets.push_back(static_cast<ClassId>(*t));
  }
  ds.features = DenseMatrix(ds.targets.size(), L, std::move(data));
  ds.validate();
  return {std::move(ds), std::move(meta)};
}

}  // namespace windramp
