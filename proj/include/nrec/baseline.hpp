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

// AV1-style BR contexts: a region class from the anti-diagonal index and a
// category of the clipped magnitude sum over five bottom-right neighbours.

#pragma once

#include <array>

#include "nrec/coefficients.hpp"
#include "nrec/dictionary.hpp"
#include "nrec/scan.hpp"

namespace nrec {

// DC, d = 1, d in {2,3}, d >= 4 with d = x + y.
inline constexpr int kRegionClasses = 4;
// {0}, {1,2}, {3,4}, {5,6}, {>=7}.
inline constexpr int kSumCategories = 5;
inline constexpr int kBaselineContexts = 1 + (kRegionClasses - 1) * kSumCategories;

inline constexpr std::array<Offset, 5> kBaselineNeighbors{{{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}}};
inline constexpr std::array<Offset, 3> kLrNeighbors{{{1, 0}, {0, 1}, {1, 1}}};

int region_class(Pos p);
int sum_category(int sum);

// Sum of min(|level|, 3) over the five neighbours inside the block.
int neighbor_sum(const CoefficientBlock& block, Pos p);

// 0 for DC, otherwise 1 + (class - 1) * 5 + category.
int ctx_baseline(const CoefficientBlock& block, Pos p);

// LR context from the three nearest neighbours clipped to 15.
inline constexpr int kLrMagCategories = 7;
inline constexpr int kLrContexts = kRegionClasses * kLrMagCategories;
int ctx_lr(const CoefficientBlock& block, Pos p);

}  // namespace nrec
