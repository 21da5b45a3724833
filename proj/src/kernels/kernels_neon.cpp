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

#if defined(__aarch64__) && defined(__ARM_NEON)
#define WINDRAMP_HAVE_NEON_VARIANT 1
#include <arm_neon.h>
#else
#define WINDRAMP_HAVE_NEON_VARIANT 0
#endif

namespace windramp::kernels {

#if WINDRAMP_HAVE_NEON_VARIANT
namespace {

void softmax_gradients_neon(const double* scores, std::size_t n, int num_classes,
                            const std::int32_t* targets, double* grad, double* hess) {
  const std::size_t C = static_cast<std::size_t>(num_classes);
  const float64x2_t one = vdupq_n_f64(1.0);
  double lane[2];
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t max_score = vld1q_f64(scores + i);
    for (std::size_t c = 1; c < C; ++c) max_score = vmaxq_f64(max_score, vld1q_f64(scores + c * n + i));
    float64x2_t sum = vdupq_n_f64(0.0);
    for (std::size_t c = 0; c < C; ++c) {
      vst1q_f64(lane, vsubq_f64(vld1q_f64(scores + c * n + i), max_score));
      lane[0] = std::exp(lane[0]);
      lane[1] = std::exp(lane[1]);
      const float64x2_t e = vld1q_f64(lane);
      vst1q_f64(grad + c * n + i, e);
      sum = vaddq_f64(sum, e);
    }
    const float64x2_t target = {static_cast<double>(targets[i]), static_cast<double>(targets[i + 1])};
    for (std::size_t c = 0; c < C; ++c) {
      const float64x2_t p = vdivq_f64(vld1q_f64(grad + c * n + i), sum);
      const uint64x2_t hit = vceqq_f64(target, vdupq_n_f64(static_cast<double>(c)));
      const float64x2_t indicator =
          vreinterpretq_f64_u64(vandq_u64(hit, vreinterpretq_u64_f64(one)));
      vst1q_f64(grad + c * n + i, vsubq_f64(p, indicator));
      vst1q_f64(hess + c * n + i, vmulq_f64(p, vsubq_f64(one, p)));
    }
  }
  for (; i < n; ++i) reference::softmax_row(scores, n, i, num_classes, targets[i], grad, hess);
}

void split_gains_neon(const double* left_g, const double* left_h, std::size_t count, double total_g,
                      double total_h, double lambda, double parent_term, double gamma,
                      double* gain) {
  const float64x2_t tg = vdupq_n_f64(total_g);
  const float64x2_t th = vdupq_n_f64(total_h);
  const float64x2_t lam = vdupq_n_f64(lambda);
  const float64x2_t parent = vdupq_n_f64(parent_term);
  const float64x2_t gam = vdupq_n_f64(gamma);
  const float64x2_t half = vdupq_n_f64(0.5);
  std::size_t k = 0;
  for (; k + 2 <= count; k += 2) {
    const float64x2_t gl = vld1q_f64(left_g + k);
    const float64x2_t hl = vld1q_f64(left_h + k);
    const float64x2_t gr = vsubq_f64(tg, gl);
    const float64x2_t hr = vsubq_f64(th, hl);
    const float64x2_t left = vdivq_f64(vmulq_f64(gl, gl), vaddq_f64(hl, lam));
    const float64x2_t right = vdivq_f64(vmulq_f64(gr, gr), vaddq_f64(hr, lam));
    const float64x2_t inner = vsubq_f64(vaddq_f64(left, right), parent);
    vst1q_f64(gain + k, vsubq_f64(vmulq_f64(half, inner), gam));
  }
  for (; k < count; ++k) {
    gain[k] = reference::split_gain(left_g[k], left_h[k], total_g, total_h, lambda, parent_term,
                                    gamma);
  }
}

void add_scaled_neon(double* dst, const double* src, double scale, std::size_t n) {
  const float64x2_t s = vdupq_n_f64(scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), vmulq_f64(s, vld1q_f64(src + i))));
  }
  for (; i < n; ++i) dst[i] += scale * src[i];
}

void count_boundaries_neon(const double* x, std::size_t n, const double* boundaries,
                           std::size_t num_boundaries, std::int32_t* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    int64x2_t id = vdupq_n_s64(1);
    for (std::size_t b = 0; b < num_boundaries; ++b) {
      const uint64x2_t ge = vcgeq_f64(v, vdupq_n_f64(boundaries[b]));
      id = vsubq_s64(id, vreinterpretq_s64_u64(ge));
    }
    out[i] = static_cast<std::int32_t>(vgetq_lane_s64(id, 0));
    out[i + 1] = static_cast<std::int32_t>(vgetq_lane_s64(id, 1));
  }
  for (; i < n; ++i) out[i] = reference::count_boundaries(x[i], boundaries, num_boundaries);
}

constexpr KernelSet kNeon{Isa::kNeon,           "neon",
                          softmax_gradients_neon, split_gains_neon,
                          add_scaled_neon,        count_boundaries_neon};

}  // namespace

const KernelSet* neon_kernels() { return &kNeon; }

#else

const KernelSet* neon_kernels() { return nullptr; }

#endif

}  // namespace windramp::kernels
