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

// Simplified grouped contexts: positions are grouped by baseline region
// class and a stored correlated-neighbourhood template, and every group
// shares one tree.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nrec/dictionary.hpp"
#include "nrec/geometry.hpp"
#include "nrec/scheme.hpp"

namespace nrec {

enum TemplateId : int { kTemplateEmpty = 0, kTemplatePair = 1, kTemplateTriple = 2 };
inline constexpr int kTemplates = 3;

inline constexpr std::uint64_t kMinGroupSymbols = 500;

// Types 1-3 with a square or 1:2 box.
bool cts_eligible(const CanonicalShape& shape);
std::vector<int> cts_shape_ids(const ShapeInventory& inventory);

// Every offset with du, dv >= 0 and 1 <= du + dv <= n_nbd.
std::vector<Offset> full_neighborhood(int n_nbd);

struct SimplifiedScheme {
  int shape_id = -1;
  int n_nbd = 0;
  double th_c = 0.0;
  std::array<std::vector<Offset>, kTemplates> templates;
  std::vector<int> template_of;  // per position
  std::vector<int> group_of;     // per position
  std::vector<int> group_template;
  std::vector<int> group_class;  // region class the group was seeded from
  Scheme scheme;                 // full trees, one per group

  int group_count() const { return static_cast<int>(group_template.size()); }
};

// Groups with fewer than `min_group_symbols` training symbols
// (positions x training_blocks) join the nearest region class with the same
// template. Throws std::invalid_argument for an ineligible shape.
SimplifiedScheme build_cts(const CanonicalShape& shape, const PartitionedDictionary& dict,
                           int n_nbd, double th_c, std::uint64_t training_blocks,
                           std::uint64_t min_group_symbols = kMinGroupSymbols);

}  // namespace nrec
