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

// Loading and validation of wind-power time series from delimited text.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace windramp {

struct SeriesPoint {
  std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
  double power = 0.0;          // MW

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

// Half-open index range [begin, end) of gap-free points.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

enum class GapPolicy {
  kSplit,  // break the series into contiguous segments at every missing step
  kError,  // any missing step is a data error
};

GapPolicy parse_gap_policy(const std::string& name);

// Uniformly sampled power series, possibly made of several contiguous
// segments. Immutable once constructed.
class WindPowerSeries {
 public:
  // Validates ordering, stride and power range; throws DataError. Points
  // must already be sorted; gaps that are whole multiples of the resolution
  // start a new segment unless the policy is kError.
  WindPowerSeries(std::vector<SeriesPoint> points, std::int64_t resolution_s,
                  double rated_capacity_mw, std::string site_id = {},
                  GapPolicy gap_policy = GapPolicy::kSplit);

  // Single-segment convenience for generated series starting at `start`.
  static WindPowerSeries from_powers(std::span<const double> powers, std::int64_t resolution_s,
                                     double rated_capacity_mw, std::int64_t start = 0,
                                     std::string site_id = {});

  std::span<const SeriesPoint> points() const noexcept { return points_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::int64_t resolution_s() const noexcept { return resolution_s_; }
  double rated_capacity_mw() const noexcept { return rated_capacity_mw_; }
  const std::string& site_id() const noexcept { return site_id_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  double power(std::size_t i) const { return points_[i].power; }

 private:
  std::vector<SeriesPoint> points_;
  std::vector<Segment> segments_;
  std::int64_t resolution_s_;
  double rated_capacity_mw_;
  std::string site_id_;
};

struct CsvSchema {
  std::string timestamp_column = "timestamp";
  std::string power_column = "power_mw";
  char delimiter = ',';
};

struct LoadOptions {
  CsvSchema schema;
  std::int64_t resolution_s = 600;
  double rated_capacity_mw = 0.0;
  GapPolicy gap_policy = GapPolicy::kSplit;
  std::string site_id;
};

struct LoadReport {
  std::size_t rows_read = 0;        // data rows in the file, excluding blank lines
  std::size_t rows_dropped = 0;     // rows with a missing power value
  std::size_t rows_gap_filled = 0;  // always 0: no policy fabricates values
  std::size_t segments = 0;
};

struct LoadedSeries {
  WindPowerSeries series;
  LoadReport report;
};

LoadedSeries load_series(const std::filesystem::path& path, const LoadOptions& options);
LoadedSeries parse_series(std::istream& in, const LoadOptions& options);

// Writes epoch-second timestamps and shortest round-trip power values.
void write_series(std::ostream& out, const WindPowerSeries& series, const CsvSchema& schema = {});

// Parses epoch seconds ("1500000000") or ISO-8601 ("2007-01-01T00:10:00Z",
// optional fractional seconds and +hh:mm offset). Throws DataError.
std::int64_t parse_timestamp(std::string_view text);

struct SeriesStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double capacity_fraction = 0.0;  // mean / rated capacity
};

SeriesStats series_stats(const WindPowerSeries& series);
nlohmann::json to_json(const SeriesStats& stats);

}  // namespace windramp
