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

// Seeded synthetic wind-power series for fixtures and benchmarks.

#include <cstddef>
#include <cstdint>
#include <random>

#include "windramp/ingest.hpp"

namespace windramp {

// Power wanders around a low or a high plateau (mean-reverting noise whose
// volatility switches between a calm and a gusty regime) and moves between
// plateaus through linear ramps lasting 1..max_ramp_steps samples.
struct SyntheticOptions {
  std::size_t points = 50'000;
  std::int64_t resolution_s = 600;
  std::int64_t start_timestamp = 1'167'609'600;  // 2007-01-01T00:00:00Z
  double rated_capacity_mw = 100.0;
  double ramp_probability = 0.03;  // per sample, outside a ramp
  int max_ramp_steps = 4;
  std::uint64_t seed = 7;
  std::string site_id = "synthetic";
};

WindPowerSeries generate_ramp_series(const SyntheticOptions& options);

// Deterministic standard normal and uniform draws from raw mt19937_64
// output (the standard distributions are implementation-defined).
class SeededNoise {
 public:
  explicit SeededNoise(std::uint64_t seed) : rng_(seed) {}
  double uniform();  // [0, 1)
  double normal();
  std::uint64_t below(std::uint64_t bound) { return rng_() % bound; }

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace windramp
