// Copyright 2026 The nrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nrec/scheme.hpp"

#include <algorithm>
#include <stdexcept>

#include "nrec/baseline.hpp"

namespace nrec {

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kBaseline: return "baseline";
    case SchemeKind::kBaselinePooled: return "baseline_pooled";
    case SchemeKind::kCtf: return "ctf";
    case SchemeKind::kCtm: return "ctm";
    case SchemeKind::kCts: return "cts";
  }
  return "?";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) {
  for (SchemeKind k : {SchemeKind::kBaseline, SchemeKind::kBaselinePooled, SchemeKind::kCtf,
                       SchemeKind::kCtm, SchemeKind::kCts}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

Scheme::Scheme(SchemeKind kind, int width, int height, std::vector<int> model_of,
               std::vector<int> tree_of, std::vector<ContextTree> trees)
    : kind_(kind),
      width_(width),
      height_(height),
      model_of_(std::move(model_of)),
      tree_of_(std::move(tree_of)),
      trees_(std::move(trees)) {
  const auto n = static_cast<std::size_t>(width_) * height_;
  if (model_of_.size() != n || tree_of_.size() != n)
    throw std::invalid_argument("scheme maps do not cover the block");
  for (std::size_t p = 0; p < n; ++p) {
    if (model_of_[p] < 0) throw std::invalid_argument("negative model id");
    if (tree_of_[p] >= static_cast<int>(trees_.size()))
      throw std::invalid_argument("tree id out of range");
    if (tree_of_[p] >= 0 && tree_of_[p] != model_of_[p])
      throw std::invalid_argument("tree positions must use the tree's own model");
    model_count_ = std::max(model_count_, model_of_[p] + 1);
  }
}

Scheme Scheme::baseline(int width, int height) {
  const int n = width * height;
  std::vector<int> model(n);
  for (int p = 0; p < n; ++p) model[p] = p;
  return Scheme(SchemeKind::kBaseline, width, height, std::move(model), std::vector<int>(n, -1), {});
}

Scheme Scheme::baseline_pooled(int width, int height) {
  const int n = width * height;
  return Scheme(SchemeKind::kBaselinePooled, width, height, std::vector<int>(n, 0),
                std::vector<int>(n, -1), {});
}

Scheme Scheme::ctf(const PartitionedDictionary& dict, int n_nbd, double th_c) {
  const int n = dict.atom_count();
  std::vector<int> ids(n);
  std::vector<ContextTree> trees;
  trees.reserve(n);
  for (int p = 0; p < n; ++p) {
    ids[p] = p;
    trees.push_back(ctx_tree_full(split_neighborhood(dict, dict.freq(p), n_nbd, th_c)));
  }
  return Scheme(SchemeKind::kCtf, dict.width(), dict.height(), ids, ids, std::move(trees));
}

int Scheme::context_count(int model) const {
  for (std::size_t p = 0; p < model_of_.size(); ++p) {
    if (model_of_[p] == model && tree_of_[p] >= 0) return trees_[tree_of_[p]].leaf_count();
  }
  return kBaselineContexts;
}

int Scheme::total_contexts() const {
  int n = 0;
  for (int m = 0; m < model_count_; ++m) n += context_count(m);
  return n;
}

ContextRef Scheme::context(const CoefficientBlock& block, Pos p) const {
  const int idx = p.y * width_ + p.x;
  const int t = tree_of_[idx];
  if (t < 0) return {model_of_[idx], ctx_baseline(block, p)};
  return {model_of_[idx], trees_[t].lookup(block, p)};
}

Scheme Scheme::with_trees(SchemeKind kind, std::vector<ContextTree> trees) const {
  if (trees.size() != trees_.size()) throw std::invalid_argument("tree count changed");
  return Scheme(kind, width_, height_, model_of_, tree_of_, std::move(trees));
}

}  // namespace nrec
