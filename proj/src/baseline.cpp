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

#include "nrec/baseline.hpp"

#include <algorithm>
#include <cstdlib>

namespace nrec {

int region_class(Pos p) {
  const int d = p.x + p.y;
  if (d == 0) return 0;
  if (d == 1) return 1;
  if (d <= 3) return 2;
  return 3;
}

int sum_category(int sum) { return std::min((sum + 1) >> 1, kSumCategories - 1); }

int neighbor_sum(const CoefficientBlock& block, Pos p) {
  int sum = 0;
  for (const Offset& o : kBaselineNeighbors) {
    const int x = p.x + o.du;
    const int y = p.y + o.dv;
    if (block.inside(x, y)) sum += std::min(std::abs(block.at(x, y)), 3);
  }
  return sum;
}

int ctx_baseline(const CoefficientBlock& block, Pos p) {
  const int cls = region_class(p);
  if (cls == 0) return 0;
  return 1 + (cls - 1) * kSumCategories + sum_category(neighbor_sum(block, p));
}

int ctx_lr(const CoefficientBlock& block, Pos p) {
  int mag = 0;
  for (const Offset& o : kLrNeighbors) {
    const int x = p.x + o.du;
    const int y = p.y + o.dv;
    if (block.inside(x, y)) mag += std::min(std::abs(block.at(x, y)), 15);
  }
  return region_class(p) * kLrMagCategories + std::min((mag + 1) >> 1, kLrMagCategories - 1);
}

}  // namespace nrec
