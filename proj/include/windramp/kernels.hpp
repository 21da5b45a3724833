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

// Data-parallel inner loops shared by labeling and boosting.
//
// Every kernel exists as a scalar reference and as SIMD variants selected at
// runtime. The variants perform the same IEEE operations in the same order on
// each element, so their outputs are bit-identical to the scalar reference;
// the equivalence tests compare exact bit patterns. Transcendentals (exp) are
// always evaluated with the scalar libm call.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace windramp::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelSet {
  Isa isa;
  std::string_view name;

  // Softmax cross-entropy gradients. `scores`, `grad` and `hess` are
  // class-major (num_classes blocks of n). `targets` are zero-based.
  //   p = softmax(scores_i), g = p - onehot(y_i), h = p (1 - p)
  void (*softmax_gradients)(const double* scores, std::size_t n, int num_classes,
                            const std::int32_t* targets, double* grad, double* hess);

  // Split gain for every left prefix:
  //   gain_k = 0.5 * (GL^2/(HL+l) + GR^2/(HR+l) - parent_term) - gamma
  // with GR = total_g - GL, HR = total_h - HL, parent_term = GP^2/(HP+l).
  void (*split_gains)(const double* left_g, const double* left_h, std::size_t count,
                      double total_g, double total_h, double lambda, double parent_term,
                      double gamma, double* gain);

  // dst[i] += scale * src[i]
  void (*add_scaled)(double* dst, const double* src, double scale, std::size_t n);

  // out[i] = 1 + #{ b : x[i] >= boundaries[b] }, boundaries ascending.
  void (*count_boundaries)(const double* x, std::size_t n, const double* boundaries,
                           std::size_t num_boundaries, std::int32_t* out);
};

const KernelSet& scalar_kernels();
// nullptr when the variant is not compiled in or not supported by this CPU.
const KernelSet* avx2_kernels();
const KernelSet* neon_kernels();

// Every variant usable on this machine, scalar first.
std::vector<const KernelSet*> available_kernels();

// The widest available variant. The WINDRAMP_KERNELS environment variable
// ("scalar", "avx2", "neon") forces a specific variant when it is available.
const KernelSet& active_kernels();

}  // namespace windramp::kernels
