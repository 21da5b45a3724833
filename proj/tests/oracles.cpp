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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace windramp::oracle {

std::optional<gbrt::SplitCandidate> brute_force_split(const DenseMatrix& features,
                                                      std::span<const double> grad,
                                                      std::span<const double> hess,
                                                      const gbrt::HyperParams& params) {
  const std::size_t n = features.rows();
  double total_g = 0.0, total_h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total_g += grad[i];
    total_h += hess[i];
  }
  std::optional<gbrt::SplitCandidate> best;
  for (std::size_t f = 0; f < features.cols(); ++f) {
    std::set<double> distinct;
    for (std::size_t i = 0; i < n; ++i) distinct.insert(features(i, f));
    std::vector<double> values(distinct.begin(), distinct.end());
    for (std::size_t v = 1; v < values.size(); ++v) {
      double gl = 0.0, hl = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (features(i, f) < values[v]) {
          gl += grad[i];
          hl += hess[i];
          ++count;
        }
      }
      const double gr = total_g - gl;
      const double hr = total_h - hl;
      if (hl < params.min_child_hessian || hr < params.min_child_hessian) continue;
      const double gain = 0.5 * (gl * gl / (hl + params.lambda) + gr * gr / (hr + params.lambda) -
                                 total_g * total_g / (total_h + params.lambda)) -
                          params.gamma;
      if (!(gain > 0.0)) continue;
      gbrt::SplitCandidate c;
      c.feature = static_cast<int>(f);
      c.threshold = values[v - 1] + (values[v] - values[v - 1]) / 2.0;
      c.gain = gain;
      c.left_g = gl;
      c.left_h = hl;
      c.right_g = gr;
      c.right_h = hr;
      c.left_count = count;
      const bool better = !best || gain > best->gain ||
                          (gain == best->gain && (c.feature < best->feature ||
                                                  (c.feature == best->feature && c.threshold < best->threshold)));
      if (better) best = c;
    }
  }
  return best;
}

double row_cross_entropy(std::span<const double> scores, ClassId target) {
  const double m = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - m);
  return -(scores[static_cast<std::size_t>(target - 1)] - m - std::log(sum));
}

NaiveMetrics naive_metrics(std::span<const ClassId> truth, std::span<const ClassId> predicted,
                           int num_classes, std::span<const ClassId> rare) {
  NaiveMetrics m;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) correct += truth[i] == predicted[i] ? 1 : 0;
  m.accuracy = truth.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());
  for (ClassId c = 1; c <= num_classes; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (predicted[i] == c && truth[i] == c) tp += 1;
      if (predicted[i] == c && truth[i] != c) fp += 1;
      if (predicted[i] != c && truth[i] == c) fn += 1;
    }
    const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    m.precision.push_back(p);
    m.recall.push_back(r);
    m.f1.push_back(p + r > 0 ? 2 * p * r / (p + r) : 0.0);
  }
  for (double f : m.f1) m.macro_f1 += f / num_classes;
  for (ClassId c : rare) m.rare_f1 += m.f1[static_cast<std::size_t>(c - 1)] / static_cast<double>(rare.size());
  return m;
}

double walk_tree(const gbrt::RegressionTree& tree, std::span<const double> row) {
  std::size_t i = 0;
  while (tree.nodes[i].left >= 0) {
    const auto& node = tree.nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] < node.threshold ? node.left
                                                                                              : node.right);
  }
  return tree.nodes[i].weight;
}

std::vector<double> objective_by_round(const gbrt::GbrtModel& model, const LabeledDataset& ds) {
  const std::size_t n = ds.size();
  const auto C = static_cast<std::size_t>(model.num_classes());
  const double lr = model.learning_rate();
  const auto& p = model.params();
  std::vector<double> scores(n * C);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < C; ++c) scores[i * C + c] = model.base_score()[c];
  }
  auto loss = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += row_cross_entropy(std::span<const double>(scores).subspan(i * C, C), ds.targets[i]);
    }
    return total;
  };
  std::vector<double> out{loss()};
  double omega = 0.0;
  for (const auto& round : model.rounds()) {
    for (std::size_t c = 0; c < C; ++c) {
      const auto& tree = round[c];
      for (const auto& node : tree.nodes) {
        if (node.left < 0) omega += p.gamma + 0.5 * p.lambda * (lr * node.weight) * (lr * node.weight);
      }
      for (std::size_t i = 0; i < n; ++i) scores[i * C + c] += lr * walk_tree(tree, ds.features.row(i));
    }
    out.push_back(loss() + omega);
  }
  return out;
}

namespace {

constexpr double kGradAlphabet[] = {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0};
constexpr double kHessAlphabet[] = {0.25, 0.5, 0.75, 1.0, 1.5};

gbrt::HyperParams sweep_params(std::uint64_t k) {
  gbrt::HyperParams p;
  p.lambda = (k & 1) ? 0.5 : 1.0;
  p.min_child_hessian = (k & 2) ? 1.0 : 0.0;
  p.gamma = (k & 4) ? 0.125 : 0.0;
  return p;
}

void compare_case(const DenseMatrix& x, std::mt19937_64& rng, std::uint64_t k,
                  const kernels::KernelSet* kernels, SweepStats& stats) {
  const std::size_t n = x.rows();
  std::vector<double> g(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = kGradAlphabet[rng() % std::size(kGradAlphabet)];
    h[i] = kHessAlphabet[rng() % std::size(kHessAlphabet)];
  }
  const gbrt::HyperParams p = sweep_params(k);
  std::vector<std::uint32_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<std::uint32_t>(i);
  const auto got = gbrt::find_best_split(x, rows, g, h, p, 1, kernels);
  const auto want = brute_force_split(x, g, h, p);
  ++stats.cases;
  bool same = got.has_value() == want.has_value();
  if (same && got) {
    ++stats.splits_found;
    same = got->feature == want->feature && got->threshold == want->threshold &&
           std::abs(got->gain - want->gain) <= 1e-12 && got->left_count == want->left_count;
  }
  if (!same) {
    if (stats.mismatches++ == 0) {
      std::ostringstream os;
      os << "n=" << n << " f=" << x.cols() << " got=";
      if (got) os << got->feature << '@' << got->threshold << " gain " << got->gain; else os << "none";
      os << " want=";
      if (want) os << want->feature << '@' << want->threshold << " gain " << want->gain; else os << "none";
      stats.first_mismatch = os.str();
    }
  }
}

}  // namespace

SweepStats split_sweep(const std::vector<std::pair<int, int>>& shapes, std::uint64_t random_cases,
                       const kernels::KernelSet* kernels) {
  SweepStats stats;
  std::mt19937_64 rng(2024);
  std::uint64_t k = 0;
  for (auto [n, f] : shapes) {
    const int cells = n * f;
    std::uint64_t total = 1;
    for (int i = 0; i < cells; ++i) total *= 3;
    DenseMatrix x(static_cast<std::size_t>(n), static_cast<std::size_t>(f));
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t rest = code;
      for (int cell = 0; cell < cells; ++cell) {
        x(static_cast<std::size_t>(cell / f), static_cast<std::size_t>(cell % f)) = static_cast<double>(rest % 3);
        rest /= 3;
      }
      compare_case(x, rng, k++, kernels, stats);
    }
  }
  for (std::uint64_t r = 0; r < random_cases; ++r) {
    const std::size_t n = 5 + rng() % 4;
    DenseMatrix x(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < 3; ++j) x(i, j) = static_cast<double>(rng() % 3);
    }
    compare_case(x, rng, k++, kernels, stats);
  }
  return stats;
}

}  // namespace windramp::oracle
