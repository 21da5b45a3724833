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

#if defined(__x86_64__) || defined(_M_X64)
#define WINDRAMP_HAVE_AVX2_VARIANT 1
#include <immintrin.h>
#else
#define WINDRAMP_HAVE_AVX2_VARIANT 0
#endif

namespace windramp::kernels {

#if WINDRAMP_HAVE_AVX2_VARIANT
namespace {

#define WINDRAMP_AVX2 __attribute__((target("avx2")))

WINDRAMP_AVX2 void softmax_gradients_avx2(const double* scores, std::size_t n, int num_classes,
                                          const std::int32_t* targets, double* grad,
                                          double* hess) {
  const std::size_t C = static_cast<std::size_t>(num_classes);
  const __m256d one = _mm256_set1_pd(1.0);
  alignas(32) double lane[4];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d max_score = _mm256_loadu_pd(scores + i);
    for (std::size_t c = 1; c < C; ++c) {
      max_score = _mm256_max_pd(max_score, _mm256_loadu_pd(scores + c * n + i));
    }
    __m256d sum = _mm256_setzero_pd();
    for (std::size_t c = 0; c < C; ++c) {
      _mm256_store_pd(lane, _mm256_sub_pd(_mm256_loadu_pd(scores + c * n + i), max_score));
      for (double& v : lane) v = std::exp(v);
      const __m256d e = _mm256_load_pd(lane);
      _mm256_storeu_pd(grad + c * n + i, e);
      sum = _mm256_add_pd(sum, e);
    }
    const __m256d target =
        _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(targets + i)));
    for (std::size_t c = 0; c < C; ++c) {
      const __m256d p = _mm256_div_pd(_mm256_loadu_pd(grad + c * n + i), sum);
      const __m256d hit =
          _mm256_cmp_pd(target, _mm256_set1_pd(static_cast<double>(c)), _CMP_EQ_OQ);
      const __m256d indicator = _mm256_and_pd(hit, one);
      _mm256_storeu_pd(grad + c * n + i, _mm256_sub_pd(p, indicator));
      _mm256_storeu_pd(hess + c * n + i, _mm256_mul_pd(p, _mm256_sub_pd(one, p)));
    }
  }
  for (; i < n; ++i) reference::softmax_row(scores, n, i, num_classes, targets[i], grad, hess);
}

WINDRAMP_AVX2 void split_gains_avx2(const double* left_g, const double* left_h, std::size_t count,
                                    double total_g, double total_h, double lambda,
                                    double parent_term, double gamma, double* gain) {
  const __m256d tg = _mm256_set1_pd(total_g);
  const __m256d th = _mm256_set1_pd(total_h);
  const __m256d lam = _mm256_set1_pd(lambda);
  const __m256d parent = _mm256_set1_pd(parent_term);
  const __m256d gam = _mm256_set1_pd(gamma);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d gl = _mm256_loadu_pd(left_g + k);
    const __m256d hl = _mm256_loadu_pd(left_h + k);
    const __m256d gr = _mm256_sub_pd(tg, gl);
    const __m256d hr = _mm256_sub_pd(th, hl);
    const __m256d left = _mm256_div_pd(_mm256_mul_pd(gl, gl), _mm256_add_pd(hl, lam));
    const __m256d right = _mm256_div_pd(_mm256_mul_pd(gr, gr), _mm256_add_pd(hr, lam));
    const __m256d inner = _mm256_sub_pd(_mm256_add_pd(left, right), parent);
    _mm256_storeu_pd(gain + k, _mm256_sub_pd(_mm256_mul_pd(half, inner), gam));
  }
  for (; k < count; ++k) {
    gain[k] = reference::split_gain(left_g[k], left_h[k], total_g, total_h, lambda, parent_term,
                                    gamma);
  }
}

WINDRAMP_AVX2 void add_scaled_avx2(double* dst, const double* src, double scale, std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d scaled = _mm256_mul_pd(s, _mm256_loadu_pd(src + i));
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), scaled));
  }
  for (; i < n; ++i) dst[i] += scale * src[i];
}

WINDRAMP_AVX2 void count_boundaries_avx2(const double* x, std::size_t n, const double* boundaries,
                                         std::size_t num_boundaries, std::int32_t* out) {
  alignas(32) std::int64_t lane[4];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    __m256i id = _mm256_set1_epi64x(1);
    for (std::size_t b = 0; b < num_boundaries; ++b) {
      const __m256d ge = _mm256_cmp_pd(v, _mm256_set1_pd(boundaries[b]), _CMP_GE_OQ);
      // A true lane is all ones, i.e. -1 as an integer.
      id = _mm256_sub_epi64(id, _mm256_castpd_si256(ge));
    }
    _mm256_store_si256(reinterpret_cast<__m256i*>(lane), id);
    for (std::size_t j = 0; j < 4; ++j) out[i + j] = static_cast<std::int32_t>(lane[j]);
  }
  for (; i < n; ++i) out[i] = reference::count_boundaries(x[i], boundaries, num_boundaries);
}

#undef WINDRAMP_AVX2

constexpr KernelSet kAvx2{Isa::kAvx2,           "avx2",
                          softmax_gradients_avx2, split_gains_avx2,
                          add_scaled_avx2,        count_boundaries_avx2};

}  // namespace

const KernelSet* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
}

#else

const KernelSet* avx2_kernels() { return nullptr; }

#endif

}  // namespace windramp::kernels
