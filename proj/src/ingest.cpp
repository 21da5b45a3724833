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

#include "windramp/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"
#include "windramp/error.hpp"

namespace windramp {
namespace {

constexpr std::size_t kMaxListed = 10;

template <typename T>
std::string join_listed(const std::vector<T>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size() && i < kMaxListed; ++i) {
    if (i > 0) os << ", ";
    os << items[i];
  }
  if (items.size() > kMaxListed) os << ", ... (" << items.size() << " total)";
  return os.str();
}

bool is_missing_token(std::string_view s) {
  return s.empty() || s == "nan" || s == "NaN" || s == "NAN" || s == "NA" || s == "null";
}

int parse_fixed_digits(std::string_view s, std::size_t pos, std::size_t width) {
  if (pos + width > s.size()) return -1;
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (s[i] < '0' || s[i] > '9') return -1;
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

}  // namespace

GapPolicy parse_gap_policy(const std::string& name) {
  if (name == "split") return GapPolicy::kSplit;
  if (name == "error") return GapPolicy::kError;
  throw ConfigError("unknown gap policy '" + name + "' (expected split or error)");
}

WindPowerSeries::WindPowerSeries(std::vector<SeriesPoint> points, std::int64_t resolution_s,
                                 double rated_capacity_mw, std::string site_id,
                                 GapPolicy gap_policy)
    : points_(std::move(points)),
      resolution_s_(resolution_s),
      rated_capacity_mw_(rated_capacity_mw),
      site_id_(std::move(site_id)) {
  if (resolution_s_ <= 0) throw ConfigError("resolution must be a positive number of seconds");
  if (!(rated_capacity_mw_ > 0.0) || !std::isfinite(rated_capacity_mw_)) {
    throw ConfigError("rated capacity must be a positive finite number of MW");
  }

  std::vector<std::size_t> bad_power;
  std::vector<std::size_t> bad_time;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double p = points_[i].power;
    if (!std::isfinite(p) || p < 0.0 || p > rated_capacity_mw_) bad_power.push_back(i);
    if (points_[i].timestamp < 0) bad_time.push_back(i);
  }
  if (!bad_power.empty()) {
    throw DataError("power outside [0, " + text::format_double(rated_capacity_mw_) +
                    "] MW at point index " + join_listed(bad_power));
  }
  if (!bad_time.empty()) throw DataError("negative timestamp at point index " + join_listed(bad_time));

  if (points_.empty()) return;
  std::size_t begin = 0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const std::int64_t step = points_[i].timestamp - points_[i - 1].timestamp;
    if (step <= 0) {
      throw DataError("timestamps not strictly increasing at " +
                      std::to_string(points_[i].timestamp));
    }
    if (step % resolution_s_ != 0) {
      throw DataError("timestamp " + std::to_string(points_[i].timestamp) +
                      " is off the " + std::to_string(resolution_s_) + " s sampling grid");
    }
    if (step != resolution_s_) {
      if (gap_policy == GapPolicy::kError) {
        throw DataError("missing samples between " + std::to_string(points_[i - 1].timestamp) +
                        " and " + std::to_string(points_[i].timestamp));
      }
      segments_.push_back({begin, i});
      begin = i;
    }
  }
  segments_.push_back({begin, points_.size()});
}

WindPowerSeries WindPowerSeries::from_powers(std::span<const double> powers,
                                             std::int64_t resolution_s, double rated_capacity_mw,
                                             std::int64_t start, std::string site_id) {
  std::vector<SeriesPoint> points;
  points.reserve(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i) {
    points.push_back({start + static_cast<std::int64_t>(i) * resolution_s, powers[i]});
  }
  return WindPowerSeries(std::move(points), resolution_s, rated_capacity_mw, std::move(site_id));
}

std::int64_t parse_timestamp(std::string_view text) {
  const std::string_view s = text::trim(text);
  if (auto epoch = text::parse_int(s)) return *epoch;

  // YYYY-MM-DD[T ]HH:MM[:SS[.fff]][Z|+hh:mm|-hh:mm|+hhmm|-hhmm]
  const auto bad = [&] { return DataError("unparseable timestamp '" + std::string(s) + "'"); };
  const int year = parse_fixed_digits(s, 0, 4);
  const int month = parse_fixed_digits(s, 5, 2);
  const int day = parse_fixed_digits(s, 8, 2);
  if (year < 0 || month < 0 || day < 0 || s.size() < 16 || s[4] != '-' || s[7] != '-' ||
      (s[10] != 'T' && s[10] != ' ') || s[13] != ':') {
    throw bad();
  }
  const int hour = parse_fixed_digits(s, 11, 2);
  const int minute = parse_fixed_digits(s, 14, 2);
  int second = 0;
  std::size_t pos = 16;
  if (pos < s.size() && s[pos] == ':') {
    second = parse_fixed_digits(s, pos + 1, 2);
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        if (s[pos] != '0') throw DataError("sub-second timestamp '" + std::string(s) + "'");
        ++pos;
      }
    }
  }
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60) throw bad();

  std::int64_t offset = 0;
  if (pos < s.size()) {
    const char sign = s[pos];
    if (sign == 'Z' && pos + 1 == s.size()) {
      offset = 0;
    } else if (sign == '+' || sign == '-') {
      const int oh = parse_fixed_digits(s, pos + 1, 2);
      std::size_t mpos = pos + 3;
      if (mpos < s.size() && s[mpos] == ':') ++mpos;
      const int om = parse_fixed_digits(s, mpos, 2);
      if (oh < 0 || om < 0 || mpos + 2 != s.size()) throw bad();
      offset = (sign == '+' ? 1 : -1) * (oh * 3600 + om * 60);
    } else {
      throw bad();
    }
  }

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) throw bad();
  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

LoadedSeries parse_series(std::istream& in, const LoadOptions& options) {
  const CsvSchema& schema = options.schema;
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::trim(line).empty()) {
      header_line = line;
      header = text::split(header_line, schema.delimiter);
      break;
    }
  }
  if (header.empty()) throw DataError("input has no header row");

  const auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("missing required column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ts_col = column(schema.timestamp_column);
  const std::size_t power_col = column(schema.power_column);
  const std::size_t needed = std::max(ts_col, power_col) + 1;

  struct Row {
    SeriesPoint point;
    std::size_t line;
  };
  std::vector<Row> rows;
  LoadReport report;
  std::vector<std::string> out_of_range;

  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    ++report.rows_read;
    const auto fields = text::split(line, schema.delimiter);
    if (fields.size() < needed) {
      throw DataError("malformed row at line " + std::to_string(line_no) + ": expected at least " +
                      std::to_string(needed) + " fields");
    }
    std::int64_t ts = 0;
    try {
      ts = parse_timestamp(fields[ts_col]);
    } catch (const DataError& e) {
      throw DataError("malformed row at line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string_view power_text = fields[power_col];
    if (is_missing_token(power_text)) {
      ++report.rows_dropped;
      continue;
    }
    const auto power = text::parse_double(power_text);
    if (!power || !std::isfinite(*power)) {
      throw DataError("malformed row at line " + std::to_string(line_no) + ": power '" +
                      std::string(power_text) + "' is not a finite number");
    }
    if (*power < 0.0 || *power > options.rated_capacity_mw) {
      out_of_range.push_back("line " + std::to_string(line_no) + " (" +
                             std::string(power_text) + ")");
    }
    rows.push_back({{ts, *power}, line_no});
  }
  if (!out_of_range.empty()) {
    throw DataError("power outside [0, " + text::format_double(options.rated_capacity_mw) +
                    "] MW at " + join_listed(out_of_range));
  }
  if (rows.empty()) throw DataError("input contains no valid data rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.point.timestamp < b.point.timestamp; });
  std::vector<std::string> duplicates;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].point.timestamp == rows[i - 1].point.timestamp) {
      duplicates.push_back(std::to_string(rows[i].point.timestamp) + " (lines " +
                           std::to_string(rows[i - 1].line) + ", " + std::to_string(rows[i].line) +
                           ")");
    }
  }
  if (!duplicates.empty()) throw DataError("duplicate timestamps: " + join_listed(duplicates));

  std::vector<SeriesPoint> points;
  points.reserve(rows.size());
  for (const Row& r : rows) points.push_back(r.point);
  WindPowerSeries series(std::move(points), options.resolution_s, options.rated_capacity_mw,
                         options.site_id, options.gap_policy);
  report.segments = series.segments().size();
  return {std::move(series), report};
}

LoadedSeries load_series(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open series file '" + path.string() + "'");
  return parse_series(in, options);
}

void write_series(std::ostream& out, const WindPowerSeries& series, const CsvSchema& schema) {
  out << schema.timestamp_column << schema.delimiter << schema.power_column << '\n';
  for (const SeriesPoint& p : series.points()) {
    out << p.timestamp << schema.delimiter << text::format_double(p.power) << '\n';
  }
}

SeriesStats series_stats(const WindPowerSeries& series) {
  if (series.empty()) throw DataError("series is empty");
  SeriesStats stats;
  stats.count = series.size();
  stats.min = series.power(0);
  stats.max = series.power(0);
  double sum = 0.0;
  for (const SeriesPoint& p : series.points()) {
    stats.min = std::min(stats.min, p.power);
    stats.max = std::max(stats.max, p.power);
    sum += p.power;
  }
  // Clamp guards the min <= mean <= max postcondition against rounding.
  stats.mean = std::clamp(sum / static_cast<double>(stats.count), stats.min, stats.max);
  stats.capacity_fraction = stats.mean / series.rated_capacity_mw();
  return stats;
}

nlohmann::json to_json(const SeriesStats& stats) {
  return {{"count", stats.count},
          {"min", stats.min},
          {"max", stats.max},
          {"mean", stats.mean},
          {"capacity_fraction", stats.capacity_fraction}};
}

}  // namespace windramp
