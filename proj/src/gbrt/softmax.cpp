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
#include <cmath>

#include "windramp/error.hpp"
#include "windramp/gbrt.hpp"

namespace windramp::gbrt {

std::vector<GradientPair> softmax_gradients(const DenseMatrix& scores,
                                            std::span<const ClassId> targets) {
  const std::size_t n = scores.rows();
  const std::size_t C = scores.cols();
  if (targets.size() != n) throw DataError("score rows and targets differ in length");
  std::vector<double> class_major(n * C);
  std::vector<std::int32_t> zero_based(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (targets[i] < 1 || targets[i] > static_cast<ClassId>(C)) {
      throw DataError("target class " + std::to_string(targets[i]) + " out of range");
    }
    zero_based[i] = targets[i] - 1;
    for (std::size_t c = 0; c < C; ++c) class_major[c * n + i] = scores(i, c);
  }
  std::vector<double> grad(n * C);
  std::vector<double> hess(n * C);
  kernels::active_kernels().softmax_gradients(class_major.data(), n, static_cast<int>(C),
                                              zero_based.data(), grad.data(), hess.data());
  std::vector<GradientPair> out(n * C);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < C; ++c) out[i * C + c] = {grad[c * n + i], hess[c * n + i]};
  }
  return out;
}

double cross_entropy(const DenseMatrix& scores, std::span<const ClassId> targets) {
  double total = 0.0;
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const auto row = scores.row(i);
    const double max_score = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double s : row) sum += std::exp(s - max_score);
    total += std::log(sum) + max_score - row[static_cast<std::size_t>(targets[i] - 1)];
  }
  return total;
}

}  // namespace windramp::gbrt
