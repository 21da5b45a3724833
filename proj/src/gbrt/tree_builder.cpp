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

#include "windramp/error.hpp"
#include "windramp/gbrt.hpp"

namespace windramp::gbrt {

ColumnIndex::ColumnIndex(const DenseMatrix& features)
    : rows_(features.rows()), cols_(features.cols()), values_(rows_ * cols_), order_(rows_ * cols_) {
  if (rows_ > UINT32_MAX) throw DataError("too many rows for a 32-bit row index");
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t f = 0; f < cols_; ++f) values_[f * rows_ + i] = features(i, f);
  }
  for (std::size_t f = 0; f < cols_; ++f) {
    auto first = order_.begin() + static_cast<std::ptrdiff_t>(f * rows_);
    auto last = first + static_cast<std::ptrdiff_t>(rows_);
    std::iota(first, last, 0u);
    const double* col = values_.data() + f * rows_;
    std::stable_sort(first, last, [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
  }
}

namespace {

struct OpenNode {
  std::int32_t id;
  std::size_t begin;
  std::size_t end;
  double g;
  double h;
};

double leaf_weight(double g, double h, double lambda) {
  const double denom = h + lambda;
  return denom > 0.0 ? -g / denom : 0.0;
}

}  // namespace

RegressionTree grow_tree(const ColumnIndex& index, std::span<const double> grad,
                         std::span<const double> hess, const HyperParams& params,
                         const GrowOptions& options, std::span<double> leaf_of_row) {
  const kernels::KernelSet& kern = options.kernels ? *options.kernels : kernels::active_kernels();
  const std::size_t n = index.rows();
  const std::size_t F = index.cols();
  const int threads = resolve_workers(options.workers);

  // Per-feature row orders; every open node owns the same [begin, end) range
  // in each feature's order, sorted by that feature's values.
  std::vector<std::uint32_t> order(n * F);
  for (std::size_t f = 0; f < F; ++f) {
    const auto s = index.sorted(f);
    std::copy(s.begin(), s.end(), order.begin() + static_cast<std::ptrdiff_t>(f * n));
  }

  RegressionTree tree;
  double root_g = 0.0;
  double root_h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    root_g += grad[i];
    root_h += hess[i];
  }
  tree.nodes.push_back({});
  std::vector<OpenNode> open{{0, 0, n, root_g, root_h}};
  std::vector<OpenNode> leaves;

  std::vector<SplitScratch> scratch(static_cast<std::size_t>(threads));
  std::vector<std::uint8_t> goes_left(n);
  std::vector<std::optional<SplitCandidate>> candidates;

  for (int depth = 0; depth < params.max_depth && !open.empty(); ++depth) {
    candidates.assign(open.size() * F, std::nullopt);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
    for (std::size_t f = 0; f < F; ++f) {
      SplitScratch& s = scratch[static_cast<std::size_t>(omp_get_thread_num())];
      const auto column = index.column(f);
      for (std::size_t a = 0; a < open.size(); ++a) {
        const OpenNode& node = open[a];
        const std::span<const std::uint32_t> rows(order.data() + f * n + node.begin,
                                                  node.end - node.begin);
        candidates[a * F + f] = best_split_for_feature(static_cast<int>(f), rows, column, grad, hess,
                                                       node.g, node.h, params, kern, s);
      }
    }

    std::vector<OpenNode> next;
    std::vector<std::size_t> split_nodes;
    for (std::size_t a = 0; a < open.size(); ++a) {
      const OpenNode& node = open[a];
      std::optional<SplitCandidate> best;
      for (std::size_t f = 0; f < F; ++f) {
        const auto& c = candidates[a * F + f];
        if (c && (!best || better_split(*c, *best))) best = c;
      }
      if (!best) {
        leaves.push_back(node);
        continue;
      }
      const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.push_back({});
      tree.nodes.push_back({});
      TreeNode& parent = tree.nodes[static_cast<std::size_t>(node.id)];
      parent.feature = best->feature;
      parent.threshold = best->threshold;
      parent.left = left_id;
      parent.right = left_id + 1;

      const std::size_t mid = node.begin + best->left_count;
      const std::uint32_t* by_feature = order.data() + static_cast<std::size_t>(best->feature) * n;
      for (std::size_t k = node.begin; k < node.end; ++k) goes_left[by_feature[k]] = k < mid;
      next.push_back({left_id, node.begin, mid, best->left_g, best->left_h});
      next.push_back({left_id + 1, mid, node.end, best->right_g, best->right_h});
      split_nodes.push_back(a);
    }

    if (!split_nodes.empty()) {
#pragma omp parallel num_threads(threads)
      {
        std::vector<std::uint32_t> right_rows;
#pragma omp for schedule(static)
        for (std::size_t f = 0; f < F; ++f) {
          for (std::size_t a : split_nodes) {
            std::uint32_t* seg = order.data() + f * n;
            std::size_t out = open[a].begin;
            right_rows.clear();
            for (std::size_t k = open[a].begin; k < open[a].end; ++k) {
              if (goes_left[seg[k]]) {
                seg[out++] = seg[k];
              } else {
                right_rows.push_back(seg[k]);
              }
            }
            std::copy(right_rows.begin(), right_rows.end(), seg + out);
          }
        }
      }
    }
    open = std::move(next);
  }
  leaves.insert(leaves.end(), open.begin(), open.end());

  for (const OpenNode& leaf : leaves) {
    const double w = leaf_weight(leaf.g, leaf.h, params.lambda);
    tree.nodes[static_cast<std::size_t>(leaf.id)].weight = w;
    if (!leaf_of_row.empty()) {
      for (std::size_t k = leaf.begin; k < leaf.end; ++k) leaf_of_row[order[k]] = w;
    }
  }
  return tree;
}

double RegressionTree::predict(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& node = nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] < node.threshold
                                     ? node.left
                                     : node.right);
  }
  return nodes[i].weight;
}

int RegressionTree::depth() const {
  std::vector<int> depth_of(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    for (std::int32_t child : {nodes[i].left, nodes[i].right}) {
      depth_of[static_cast<std::size_t>(child)] = depth_of[i] + 1;
      deepest = std::max(deepest, depth_of[i] + 1);
    }
  }
  return deepest;
}

std::size_t RegressionTree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double RegressionTree::sum_squared_leaf_weights() const {
  double s = 0.0;
  for (const TreeNode& n : nodes) {
    if (n.is_leaf()) s += n.weight * n.weight;
  }
  return s;
}

}  // namespace windramp::gbrt
