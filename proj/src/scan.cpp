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

#include "nrec/scan.hpp"

#include <cstdlib>
#include <stdexcept>

namespace nrec {

ScanOrder zigzag(int width, int height) {
  if (width < 1 || height < 1) throw std::invalid_argument("scan dimensions must be positive");
  ScanOrder s{width, height, {}, std::vector<int>(static_cast<std::size_t>(width) * height)};
  s.order.reserve(s.rank.size());
  for (int d = 0; d <= width + height - 2; ++d) {
    const int x_lo = std::max(0, d - (height - 1));
    const int x_hi = std::min(d, width - 1);
    if (d % 2 == 1) {
      for (int x = x_hi; x >= x_lo; --x) s.order.push_back({x, d - x});
    } else {
      for (int x = x_lo; x <= x_hi; ++x) s.order.push_back({x, d - x});
    }
  }
  for (std::size_t i = 0; i < s.order.size(); ++i)
    s.rank[static_cast<std::size_t>(s.order[i].y) * width + s.order[i].x] = static_cast<int>(i);
  return s;
}

SymbolDecomposition decompose(std::int32_t level) {
  const std::int32_t mag = std::abs(level);
  if (mag > kMaxAbsLevel) throw std::out_of_range("level magnitude exceeds the HR range");
  SymbolDecomposition s;
  s.negative = level < 0;
  s.br = std::min<std::int32_t>(mag, 3);
  if (s.br < 3) return s;
  std::int32_t rest = mag - 3;
  for (int i = 0; i < kMaxLrSteps; ++i) {
    const int k = std::min<std::int32_t>(rest, 3);
    s.lr.push_back(k);
    rest -= k;
    if (k < 3) return s;
  }
  s.hr = rest;
  return s;
}

std::int32_t recompose(const SymbolDecomposition& s) {
  std::int32_t mag = s.br;
  for (int k : s.lr) mag += k;
  mag += s.hr;
  return s.negative ? -mag : mag;
}

}  // namespace nrec
