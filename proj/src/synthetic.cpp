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

#include "windramp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "windramp/error.hpp"

namespace windramp {

double SeededNoise::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double SeededNoise::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

WindPowerSeries generate_ramp_series(const SyntheticOptions& o) {
  if (o.points == 0) throw ConfigError("synthetic series needs at least one point");
  if (o.max_ramp_steps < 1) throw ConfigError("max_ramp_steps must be >= 1");
  const double cap = o.rated_capacity_mw;
  SeededNoise noise(o.seed);

  constexpr double kReversion = 0.15;
  constexpr double kCalmSigma = 0.01;
  constexpr double kGustySigma = 0.035;
  constexpr double kRegimeSwitch = 0.02;

  bool high = false;
  bool gusty = false;
  double mean_level = 0.15 * cap;
  double x = mean_level;
  int ramp_left = 0;
  double ramp_step = 0.0;

  std::vector<double> powers;
  powers.reserve(o.points);
  for (std::size_t t = 0; t < o.points; ++t) {
    powers.push_back(std::clamp(x, 0.0, cap));
    if (noise.uniform() < kRegimeSwitch) gusty = !gusty;
    if (ramp_left > 0) {
      x += ramp_step + 0.005 * cap * noise.normal();
      --ramp_left;
      continue;
    }
    if (noise.uniform() < o.ramp_probability) {
      high = !high;
      mean_level = (high ? 0.85 : 0.15) * cap + 0.04 * cap * (noise.uniform() - 0.5);
      ramp_left = 1 + static_cast<int>(noise.below(static_cast<std::uint64_t>(o.max_ramp_steps)));
      ramp_step = (mean_level - x) / ramp_left;
      x += ramp_step;
      --ramp_left;
      continue;
    }
    const double sigma = (gusty ? kGustySigma : kCalmSigma) * cap;
    x += kReversion * (mean_level - x) + sigma * noise.normal();
    x = std::clamp(x, 0.0, cap);
  }
  return WindPowerSeries::from_powers(powers, o.resolution_s, cap, o.start_timestamp, o.site_id);
}

}  // namespace windramp
