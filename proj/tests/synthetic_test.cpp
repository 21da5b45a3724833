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

#include <gtest/gtest.h>

#include <cmath>

#include "windramp/labeling.hpp"

namespace windramp {
namespace {

TEST(Synthetic, DeterministicPerSeed) {
  SyntheticOptions o;
  o.points = 5000;
  const auto a = generate_ramp_series(o);
  const auto b = generate_ramp_series(o);
  ASSERT_EQ(a.size(), 5000u);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a.points()[i], b.points()[i]);
  o.seed = 8;
  const auto c = generate_ramp_series(o);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += a.power(i) != c.power(i) ? 1 : 0;
  EXPECT_GT(differ, 4000u);
}

TEST(Synthetic, StaysInRangeOnGrid) {
  SyntheticOptions o;
  o.points = 20000;
  o.rated_capacity_mw = 20;
  const auto s = generate_ramp_series(o);
  for (std::size_t i = 0; i < s.size(); ++i) {
    ASSERT_GE(s.power(i), 0.0);
    ASSERT_LE(s.power(i), 20.0);
    ASSERT_EQ(s.points()[i].timestamp, o.start_timestamp + static_cast<std::int64_t>(i) * 600);
  }
}

TEST(Synthetic, SevereRampsAreRareButPresent) {
  SyntheticOptions o;
  const auto s = generate_ramp_series(o);
  const auto t = ThresholdSet::from_capacity_fraction(o.rated_capacity_mw, 0.5);
  for (int step : {1, 6}) {
    auto ds = build_dataset(s, {step, 4}, t);
    const double rare = class_distribution(ds.targets, 4).rare_fraction(t.rare_classes());
    EXPECT_GT(rare, 0.002) << step;
    EXPECT_LT(rare, 0.2) << step;
  }
}

TEST(SeededNoise, MomentsOfNormalDraws) {
  SeededNoise noise(1);
  double sum = 0.0, sq = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = noise.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
  for (int i = 0; i < 1000; ++i) {
    const double u = noise.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace windramp
