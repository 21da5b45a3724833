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

// Per-element reference arithmetic. SIMD variants use these for loop tails so
// the tail elements follow the scalar operation order exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace windramp::kernels::reference {

inline void softmax_row(const double* scores, std::size_t stride, std::size_t i, int num_classes,
                        std::int32_t target, double* grad, double* hess) {
  const std::size_t C = static_cast<std::size_t>(num_classes);
  double max_score = scores[i];
  for (std::size_t c = 1; c < C; ++c) max_score = std::max(max_score, scores[c * stride + i]);
  double sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    const double e = std::exp(scores[c * stride + i] - max_score);
    grad[c * stride + i] = e;
    sum += e;
  }
  for (std::size_t c = 0; c < C; ++c) {
    const double p = grad[c * stride + i] / sum;
    const double indicator = static_cast<std::int32_t>(c) == target ? 1.0 : 0.0;
    grad[c * stride + i] = p - indicator;
    hess[c * stride + i] = p * (1.0 - p);
  }
}

inline double split_gain(double gl, double hl, double total_g, double total_h, double lambda,
                         double parent_term, double gamma) {
  const double gr = total_g - gl;
  const double hr = total_h - hl;
  const double left = gl * gl / (hl + lambda);
  const double right = gr * gr / (hr + lambda);
  return 0.5 * (left + right - parent_term) - gamma;
}

inline std::int32_t count_boundaries(double x, const double* boundaries, std::size_t num_boundaries) {
  std::int32_t id = 1;
  for (std::size_t b = 0; b < num_boundaries; ++b) id += x >= boundaries[b] ? 1 : 0;
  return id;
}

}  // namespace windramp::kernels::reference
