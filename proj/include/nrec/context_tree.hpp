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

// Context trees over three conditions on the decoded bottom-right
// neighbourhood: C1 (all zero), C2 (non-zeros in the correlated set) and
// C3 (clipped l1 norm over the rest).

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nrec/coefficients.hpp"
#include "nrec/dictionary.hpp"
#include "nrec/scan.hpp"

namespace nrec {

inline constexpr int kC3Values = 13;  // 0..12
inline constexpr int kC3Max = kC3Values - 1;

using BrCounts = std::array<std::uint64_t, kBrSymbols>;

struct Conditions {
  bool all_zero = true;  // C1
  int c2 = 0;
  int c3 = 0;
};

// Offsets falling outside the block read as zero.
Conditions evaluate_conditions(const CoefficientBlock& block, Pos p, std::span<const Offset> nc,
                               std::span<const Offset> no);

// Leaves of the full tree including the C1 leaf:
// 1 + (|Nc|+1)*13 for |Nc| < 3, otherwise 1 + |Nc|*13 + 1.
int leaf_count(int nc_size);
// Same count without the C1 leaf.
int leaf_count_without_c1(int nc_size);

// 0 is the C1 leaf, 1 + c2*13 + c3 the regular leaves and 1 + |Nc|*13 the
// saturated leaf of a fully occupied Nc (|Nc| >= 3).
int full_leaf(int nc_size, const Conditions& c);

struct Leaf {
  enum class Kind : std::uint8_t { kAllZero, kRange, kSaturated };
  Kind kind = Kind::kAllZero;
  int c2 = 0;
  int c3_lo = 0;
  int c3_hi = 0;

  friend bool operator==(const Leaf&, const Leaf&) = default;
};

class ContextTree {
 public:
  ContextTree() = default;
  // Full tree for the given split of the neighbourhood.
  ContextTree(std::vector<Offset> nc, std::vector<Offset> no);

  int nc_size() const { return static_cast<int>(nc_.size()); }
  const std::vector<Offset>& nc() const { return nc_; }
  const std::vector<Offset>& no() const { return no_; }
  bool merged() const { return merged_; }

  int full_leaf_count() const { return static_cast<int>(leaf_of_full_.size()); }
  int leaf_count() const { return static_cast<int>(leaves_.size()); }
  const std::vector<Leaf>& leaves() const { return leaves_; }
  const std::vector<int>& leaf_of_full() const { return leaf_of_full_; }

  int leaf_for(const Conditions& c) const { return leaf_of_full_[full_leaf(nc_size(), c)]; }
  int lookup(const CoefficientBlock& block, Pos p) const {
    return leaf_for(evaluate_conditions(block, p, nc_, no_));
  }

  // Replaces the leaves; `groups[c2]` lists the C3 interval ends (inclusive)
  // for that C2 node in ascending order.
  ContextTree with_c3_intervals(const std::vector<std::vector<int>>& groups) const;

  friend bool operator==(const ContextTree&, const ContextTree&) = default;

 private:
  int c2_nodes() const;

  std::vector<Offset> nc_;
  std::vector<Offset> no_;
  bool merged_ = false;
  std::vector<Leaf> leaves_;
  std::vector<int> leaf_of_full_;
};

ContextTree ctx_tree_full(const NeighborhoodPartition& partition);

// Plug-in conditional entropy H(S2|S1) in bits per symbol.
double conditional_entropy(std::span<const BrCounts> counts);

// n * H(counts) in bits.
double weighted_entropy_bits(const BrCounts& counts);

struct MergeStep {
  int c2 = 0;
  int left_lo = 0;
  int left_hi = 0;
  int right_hi = 0;
  double loss = 0.0;  // bits per symbol over the whole tree
  bool accepted = false;
};

struct MergeResult {
  ContextTree tree;
  std::vector<MergeStep> steps;
};

// Zero-loss merges are always taken; the tolerance absorbs round-off.
inline constexpr double kZeroLoss = 1e-12;

// Greedy left-to-right merge of adjacent C3 leaves under each C2 node.
// `full_counts` is indexed by full leaf. Throws std::invalid_argument for
// delta < 0 or a tree that is already merged.
MergeResult merge(const ContextTree& tree, std::span<const BrCounts> full_counts, double delta);

}  // namespace nrec
