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

#include "nrec/context_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace nrec {

namespace {

std::uint64_t total(const BrCounts& c) {
  std::uint64_t n = 0;
  for (std::uint64_t v : c) n += v;
  return n;
}

BrCounts sum(const BrCounts& a, const BrCounts& b) {
  BrCounts s{};
  for (int i = 0; i < kBrSymbols; ++i) s[i] = a[i] + b[i];
  return s;
}

}  // namespace

Conditions evaluate_conditions(const CoefficientBlock& block, Pos p, std::span<const Offset> nc,
                               std::span<const Offset> no) {
  Conditions c;
  auto level = [&](const Offset& o) {
    const int x = p.x + o.du;
    const int y = p.y + o.dv;
    return block.inside(x, y) ? std::abs(block.at(x, y)) : 0;
  };
  for (const Offset& o : nc) {
    if (level(o) != 0) {
      ++c.c2;
      c.all_zero = false;
    }
  }
  int l1 = 0;
  for (const Offset& o : no) {
    const int v = level(o);
    if (v != 0) c.all_zero = false;
    l1 += v;
    if (l1 > kC3Max) l1 = kC3Max;
  }
  c.c3 = l1;
  return c;
}

int leaf_count_without_c1(int nc_size) {
  if (nc_size < 0) throw std::invalid_argument("negative neighbourhood size");
  return nc_size < 3 ? (nc_size + 1) * kC3Values : nc_size * kC3Values + 1;
}

int leaf_count(int nc_size) { return 1 + leaf_count_without_c1(nc_size); }

int full_leaf(int nc_size, const Conditions& c) {
  if (c.all_zero) return 0;
  if (nc_size >= 3 && c.c2 == nc_size) return 1 + nc_size * kC3Values;
  return 1 + c.c2 * kC3Values + c.c3;
}

ContextTree::ContextTree(std::vector<Offset> nc, std::vector<Offset> no)
    : nc_(std::move(nc)), no_(std::move(no)) {
  const int n = nrec::leaf_count(nc_size());
  leaf_of_full_.resize(n);
  leaves_.reserve(n);
  leaves_.push_back({Leaf::Kind::kAllZero, 0, 0, 0});
  leaf_of_full_[0] = 0;
  for (int c2 = 0; c2 < c2_nodes(); ++c2) {
    for (int c3 = 0; c3 < kC3Values; ++c3) {
      leaf_of_full_[1 + c2 * kC3Values + c3] = static_cast<int>(leaves_.size());
      leaves_.push_back({Leaf::Kind::kRange, c2, c3, c3});
    }
  }
  if (nc_size() >= 3) {
    leaf_of_full_[n - 1] = static_cast<int>(leaves_.size());
    leaves_.push_back({Leaf::Kind::kSaturated, nc_size(), 0, kC3Max});
  }
}

int ContextTree::c2_nodes() const { return nc_size() < 3 ? nc_size() + 1 : nc_size(); }

ContextTree ContextTree::with_c3_intervals(const std::vector<std::vector<int>>& groups) const {
  if (static_cast<int>(groups.size()) != c2_nodes())
    throw std::invalid_argument("interval list does not match the C2 nodes");
  ContextTree out(nc_, no_);
  out.merged_ = true;
  out.leaves_.clear();
  out.leaves_.push_back({Leaf::Kind::kAllZero, 0, 0, 0});
  for (int c2 = 0; c2 < c2_nodes(); ++c2) {
    int lo = 0;
    for (int hi : groups[c2]) {
      if (hi < lo || hi > kC3Max) throw std::invalid_argument("bad C3 interval");
      for (int c3 = lo; c3 <= hi; ++c3)
        out.leaf_of_full_[1 + c2 * kC3Values + c3] = static_cast<int>(out.leaves_.size());
      out.leaves_.push_back({Leaf::Kind::kRange, c2, lo, hi});
      lo = hi + 1;
    }
    if (lo != kC3Values) throw std::invalid_argument("C3 intervals do not cover 0..12");
  }
  if (nc_size() >= 3) {
    out.leaf_of_full_.back() = static_cast<int>(out.leaves_.size());
    out.leaves_.push_back({Leaf::Kind::kSaturated, nc_size(), 0, kC3Max});
  }
  return out;
}

ContextTree ctx_tree_full(const NeighborhoodPartition& partition) {
  return ContextTree(partition.nc, partition.no);
}

double weighted_entropy_bits(const BrCounts& counts) {
  const std::uint64_t n = total(counts);
  if (n == 0) return 0.0;
  double h = 0.0;
  for (std::uint64_t c : counts) {
    if (c == 0) continue;
    h -= static_cast<double>(c) * std::log2(static_cast<double>(c) / static_cast<double>(n));
  }
  return h;
}

double conditional_entropy(std::span<const BrCounts> counts) {
  std::uint64_t n = 0;
  double bits = 0.0;
  for (const BrCounts& c : counts) {
    n += total(c);
    bits += weighted_entropy_bits(c);
  }
  return n == 0 ? 0.0 : bits / static_cast<double>(n);
}

MergeResult merge(const ContextTree& tree, std::span<const BrCounts> full_counts, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("merge threshold must be non-negative");
  if (tree.merged()) throw std::invalid_argument("tree is already merged");
  if (static_cast<int>(full_counts.size()) != tree.full_leaf_count())
    throw std::invalid_argument("count table does not match the tree");

  std::uint64_t n = 0;
  for (const BrCounts& c : full_counts) n += total(c);
  const double scale = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);

  MergeResult result;
  const int nodes = tree.nc_size() < 3 ? tree.nc_size() + 1 : tree.nc_size();
  std::vector<std::vector<int>> groups(nodes);
  for (int c2 = 0; c2 < nodes; ++c2) {
    auto leaf_counts = [&](int c3) { return full_counts[1 + c2 * kC3Values + c3]; };
    int lo = 0;
    BrCounts current = leaf_counts(0);
    for (int c3 = 1; c3 < kC3Values; ++c3) {
      const BrCounts next = leaf_counts(c3);
      const BrCounts joined = sum(current, next);
      const double loss = (weighted_entropy_bits(joined) - weighted_entropy_bits(current) -
                           weighted_entropy_bits(next)) *
                          scale;
      MergeStep step{c2, lo, c3 - 1, c3, loss, loss < delta || loss <= kZeroLoss};
      result.steps.push_back(step);
      if (step.accepted) {
        current = joined;
      } else {
        groups[c2].push_back(c3 - 1);
        lo = c3;
        current = next;
      }
    }
    groups[c2].push_back(kC3Max);
  }
  result.tree = tree.with_c3_intervals(groups);
  return result;
}

}  // namespace nrec
