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

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "nrec/coefficients.hpp"

namespace nrec::testing {

// Sparse levels whose density and magnitude fall off away from DC.
inline std::vector<CoefficientBlock> random_blocks(int w, int h, int count, std::uint64_t seed,
                                                   int max_level = 40) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<CoefficientBlock> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    CoefficientBlock b(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double p = 0.9 / (1.0 + 0.5 * (x + y));
        if (u(rng) >= p) continue;
        std::geometric_distribution<int> mag(std::min(0.9, 0.2 + 0.1 * (x + y)));
        int v = 1 + mag(rng);
        if (v > max_level) v = max_level;
        b.at(x, y) = u(rng) < 0.5 ? -v : v;
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace nrec::testing
