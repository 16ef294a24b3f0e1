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

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nrec {

// Quantized transform levels on the bounding-box grid, row-major.
struct CoefficientBlock {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> levels;

  CoefficientBlock() = default;
  CoefficientBlock(int w, int h) : width(w), height(h), levels(static_cast<std::size_t>(w) * h, 0) {}

  int size() const { return width * height; }
  bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
  std::int32_t at(int x, int y) const { return levels[static_cast<std::size_t>(y) * width + x]; }
  std::int32_t& at(int x, int y) { return levels[static_cast<std::size_t>(y) * width + x]; }
  bool all_zero() const {
    for (std::int32_t l : levels)
      if (l != 0) return false;
    return true;
  }

  friend bool operator==(const CoefficientBlock&, const CoefficientBlock&) = default;
};

}  // namespace nrec
