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

// Zig-zag scan and the BR / LR / HR / sign decomposition of a level.

#pragma once

#include <cstdint>
#include <vector>

namespace nrec {

struct Pos {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pos&, const Pos&) = default;
};

struct ScanOrder {
  int width = 0;
  int height = 0;
  std::vector<Pos> order;  // scan order, DC first
  std::vector<int> rank;   // rank[y * width + x]

  int size() const { return static_cast<int>(order.size()); }
  // Coding runs the scan backwards.
  Pos coding(int i) const { return order[order.size() - 1 - static_cast<std::size_t>(i)]; }
};

// Anti-diagonal zig-zag: odd diagonals run down-left, even ones up-right,
// so a 2x2 block scans (0,0) (1,0) (0,1) (1,1).
ScanOrder zigzag(int width, int height);

inline constexpr int kBrSymbols = 4;
inline constexpr int kLrSymbols = 4;
inline constexpr int kMaxLrSteps = 4;
inline constexpr int kBrLrLimit = 3 + 3 * kMaxLrSteps;  // 15
inline constexpr std::int32_t kMaxAbsLevel = (1 << 15) + 14;

struct SymbolDecomposition {
  int br = 0;           // min(|L|, 3)
  std::vector<int> lr;  // each in 0..3, a value below 3 ends the run
  int hr = 0;           // |L| - 15 once all four LR symbols are 3
  bool negative = false;

  friend bool operator==(const SymbolDecomposition&, const SymbolDecomposition&) = default;
};

// Throws std::out_of_range when |level| > kMaxAbsLevel.
SymbolDecomposition decompose(std::int32_t level);
std::int32_t recompose(const SymbolDecomposition& s);

}  // namespace nrec
