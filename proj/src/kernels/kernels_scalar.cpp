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

#include "reference.hpp"
#include "windramp/kernels.hpp"

namespace windramp::kernels {
namespace {

void softmax_gradients_scalar(const double* scores, std::size_t n, int num_classes,
                              const std::int32_t* targets, double* grad, double* hess) {
  for (std::size_t i = 0; i < n; ++i) {
    reference::softmax_row(scores, n, i, num_classes, targets[i], grad, hess);
  }
}

void split_gains_scalar(const double* left_g, const double* left_h, std::size_t count,
                        double total_g, double total_h, double lambda, double parent_term,
                        double gamma, double* gain) {
  for (std::size_t k = 0; k < count; ++k) {
    gain[k] = reference::split_gain(left_g[k], left_h[k], total_g, total_h, lambda, parent_term,
                                    gamma);
  }
}

void add_scaled_scalar(double* dst, const double* src, double scale, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += scale * src[i];
}

void count_boundaries_scalar(const double* x, std::size_t n, const double* boundaries,
                             std::size_t num_boundaries, std::int32_t* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = reference::count_boundaries(x[i], boundaries, num_boundaries);
}

constexpr KernelSet kScalar{Isa::kScalar,          "scalar",
                            softmax_gradients_scalar, split_gains_scalar,
                            add_scaled_scalar,        count_boundaries_scalar};

}  // namespace

const KernelSet& scalar_kernels() { return kScalar; }

}  // namespace windramp::kernels
