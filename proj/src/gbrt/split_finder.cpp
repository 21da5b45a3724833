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

#include <algorithm>
#include <numeric>

#include <omp.h>

#include "windramp/gbrt.hpp"

namespace windramp::gbrt {

bool better_split(const SplitCandidate& a, const SplitCandidate& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.feature != b.feature) return a.feature < b.feature;
  return a.threshold < b.threshold;
}

std::optional<SplitCandidate> best_split_for_feature(
    int feature, std::span<const std::uint32_t> sorted_rows, std::span<const double> column,
    std::span<const double> grad, std::span<const double> hess, double total_g, double total_h,
    const HyperParams& params, const kernels::KernelSet& kernels, SplitScratch& scratch) {
  const std::size_t m = sorted_rows.size();
  if (m < 2) return std::nullopt;
  scratch.values.resize(m);
  scratch.prefix_g.resize(m);
  scratch.prefix_h.resize(m);
  scratch.gains.resize(m);

  double g = 0.0;
  double h = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::uint32_t r = sorted_rows[k];
    scratch.values[k] = column[r];
    g += grad[r];
    h += hess[r];
    scratch.prefix_g[k] = g;
    scratch.prefix_h[k] = h;
  }

  const double parent_term = total_g * total_g / (total_h + params.lambda);
  // Candidate k puts the first k + 1 rows on the left.
  kernels.split_gains(scratch.prefix_g.data(), scratch.prefix_h.data(), m - 1, total_g, total_h,
                      params.lambda, parent_term, params.gamma, scratch.gains.data());

  std::size_t best = m;
  double best_gain = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (!(scratch.values[k] < scratch.values[k + 1])) continue;
    const double hl = scratch.prefix_h[k];
    const double hr = total_h - hl;
    if (!(hl >= params.min_child_hessian) || !(hr >= params.min_child_hessian)) continue;
    if (scratch.gains[k] > best_gain) {
      best_gain = scratch.gains[k];
      best = k;
    }
  }
  if (best == m) return std::nullopt;

  const double lo = scratch.values[best];
  const double hi = scratch.values[best + 1];
  double threshold = lo + (hi - lo) / 2.0;
  if (!(threshold > lo)) threshold = hi;

  SplitCandidate c;
  c.feature = feature;
  c.threshold = threshold;
  c.gain = best_gain;
  c.left_g = scratch.prefix_g[best];
  c.left_h = scratch.prefix_h[best];
  c.right_g = total_g - c.left_g;
  c.right_h = total_h - c.left_h;
  c.left_count = best + 1;
  return c;
}

std::optional<SplitCandidate> find_best_split(const DenseMatrix& features,
                                              std::span<const std::uint32_t> rows,
                                              std::span<const double> grad,
                                              std::span<const double> hess,
                                              const HyperParams& params, int workers,
                                              const kernels::KernelSet* kernels) {
  const kernels::KernelSet& k = kernels ? *kernels : kernels::active_kernels();
  const std::size_t F = features.cols();
  double total_g = 0.0;
  double total_h = 0.0;
  for (std::uint32_t r : rows) {
    total_g += grad[r];
    total_h += hess[r];
  }

  std::vector<std::optional<SplitCandidate>> per_feature(F);
  const int threads = resolve_workers(workers);
#pragma omp parallel num_threads(threads)
  {
    SplitScratch scratch;
    std::vector<double> col(features.rows());
    std::vector<std::uint32_t> sorted(rows.begin(), rows.end());
#pragma omp for schedule(dynamic, 1)
    for (std::size_t f = 0; f < F; ++f) {
      for (std::size_t i = 0; i < features.rows(); ++i) col[i] = features(i, f);
      std::copy(rows.begin(), rows.end(), sorted.begin());
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
      per_feature[f] = best_split_for_feature(static_cast<int>(f), sorted, col, grad, hess,
                                              total_g, total_h, params, k, scratch);
    }
  }

  std::optional<SplitCandidate> best;
  for (const auto& c : per_feature) {
    if (c && (!best || better_split(*c, *best))) best = c;
  }
  return best;
}

}  // namespace windramp::gbrt
