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

// A context scheme maps every (block, position) to a probability table
// ("model") and a context inside it.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "nrec/context_tree.hpp"
#include "nrec/dictionary.hpp"

namespace nrec {

enum class SchemeKind : std::uint8_t {
  kBaseline,        // baseline contexts, one table per position
  kBaselinePooled,  // baseline contexts, one table for the whole block
  kCtf,
  kCtm,
  kCts,
};

std::string_view to_string(SchemeKind kind);
std::optional<SchemeKind> parse_scheme(std::string_view name);

struct ContextRef {
  int model = 0;
  int ctx = 0;
};

class Scheme {
 public:
  Scheme() = default;
  // tree_of[p] < 0 selects baseline contexts; otherwise model_of[p] must
  // equal tree_of[p].
  Scheme(SchemeKind kind, int width, int height, std::vector<int> model_of,
         std::vector<int> tree_of, std::vector<ContextTree> trees);

  static Scheme baseline(int width, int height);
  static Scheme baseline_pooled(int width, int height);
  // One full tree per position.
  static Scheme ctf(const PartitionedDictionary& dict, int n_nbd, double th_c);

  SchemeKind kind() const { return kind_; }
  int width() const { return width_; }
  int height() const { return height_; }
  int positions() const { return width_ * height_; }

  int model_count() const { return model_count_; }
  int context_count(int model) const;
  int total_contexts() const;

  int model_of(int pos_index) const { return model_of_[pos_index]; }
  int tree_of(int pos_index) const { return tree_of_[pos_index]; }
  const std::vector<int>& model_map() const { return model_of_; }
  const std::vector<int>& tree_map() const { return tree_of_; }
  const std::vector<ContextTree>& trees() const { return trees_; }

  ContextRef context(const CoefficientBlock& block, Pos p) const;

  // Same position maps with the trees swapped, e.g. after merging.
  Scheme with_trees(SchemeKind kind, std::vector<ContextTree> trees) const;

 private:
  SchemeKind kind_ = SchemeKind::kBaseline;
  int width_ = 0;
  int height_ = 0;
  int model_count_ = 0;
  std::vector<int> model_of_;
  std::vector<int> tree_of_;
  std::vector<ContextTree> trees_;
};

}  // namespace nrec
