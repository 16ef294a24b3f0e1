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

#include <doctest.h>

#include <cstdlib>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "nrec/baseline.hpp"
#include "nrec/scan.hpp"

namespace nrec {
namespace {

TEST_CASE("zig-zag small cases") {
  const ScanOrder s22 = zigzag(2, 2);
  CHECK(s22.order == std::vector<Pos>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  CHECK(s22.coding(0) == Pos{1, 1});
  CHECK(s22.coding(3) == Pos{0, 0});

  const ScanOrder col = zigzag(1, 4);
  CHECK(col.order == std::vector<Pos>{{0, 0}, {0, 1}, {0, 2}, {0, 3}});
  const ScanOrder row = zigzag(4, 1);
  CHECK(row.order == std::vector<Pos>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});

  const ScanOrder s33 = zigzag(3, 3);
  CHECK(s33.order == std::vector<Pos>{{0, 0}, {1, 0}, {0, 1}, {0, 2}, {1, 1}, {2, 0}, {2, 1},
                                      {1, 2}, {2, 2}});
}

TEST_CASE("zig-zag is a diagonal-ordered permutation") {
  const ScanOrder s = zigzag(8, 8);
  CHECK(std::accumulate(s.rank.begin(), s.rank.end(), 0) == 2016);
  for (int w : {1, 2, 4, 8, 16, 32}) {
    for (int h : {1, 2, 4, 8, 16, 32}) {
      const ScanOrder z = zigzag(w, h);
      REQUIRE(z.size() == w * h);
      CHECK(z.order.front() == Pos{0, 0});
      std::set<int> seen;
      for (int i = 0; i < z.size(); ++i) {
        const Pos p = z.order[i];
        CHECK(z.rank[p.y * w + p.x] == i);
        seen.insert(p.y * w + p.x);
        if (i > 0) {
          const Pos q = z.order[i - 1];
          CHECK(p.x + p.y >= q.x + q.y);
          // Consecutive entries are 8-connected neighbours or diagonal restarts.
          CHECK((p.x + p.y == q.x + q.y || p.x + p.y == q.x + q.y + 1));
        }
      }
      CHECK(static_cast<int>(seen.size()) == w * h);
    }
  }
  CHECK_THROWS(zigzag(0, 4));
}

TEST_CASE("symbol decomposition") {
  CHECK(decompose(0) == SymbolDecomposition{0, {}, 0, false});
  CHECK(decompose(-2) == SymbolDecomposition{2, {}, 0, true});
  CHECK(decompose(3) == SymbolDecomposition{3, {0}, 0, false});
  CHECK(decompose(5) == SymbolDecomposition{3, {2}, 0, false});
  CHECK(decompose(6) == SymbolDecomposition{3, {3, 0}, 0, false});
  CHECK(decompose(14) == SymbolDecomposition{3, {3, 3, 3, 2}, 0, false});
  CHECK(decompose(15) == SymbolDecomposition{3, {3, 3, 3, 3}, 0, false});
  CHECK(decompose(20) == SymbolDecomposition{3, {3, 3, 3, 3}, 5, false});
  CHECK(recompose(decompose(20)) == 20);
  CHECK(decompose(kMaxAbsLevel).hr == (1 << 15) - 1);
  CHECK_THROWS_AS(decompose(kMaxAbsLevel + 1), std::out_of_range);
  CHECK_THROWS_AS(decompose(-kMaxAbsLevel - 1), std::out_of_range);
}

TEST_CASE("decompose and recompose are inverse") {
  for (int l = -1000; l <= 1000; ++l) {
    const SymbolDecomposition s = decompose(l);
    CHECK(s.br == std::min(std::abs(l), 3));
    CHECK(s.lr.size() <= kMaxLrSteps);
    for (int v : s.lr) CHECK((v >= 0 && v <= 3));
    CHECK(recompose(s) == l);
  }
  for (std::int32_t l : {kMaxAbsLevel, -kMaxAbsLevel, kMaxAbsLevel - 1, 16, -16})
    CHECK(recompose(decompose(l)) == l);
}

TEST_CASE("region classes") {
  CHECK(region_class({0, 0}) == 0);
  CHECK(region_class({1, 0}) == 1);
  CHECK(region_class({0, 1}) == 1);
  CHECK(region_class({1, 1}) == 2);
  CHECK(region_class({3, 0}) == 2);
  CHECK(region_class({2, 2}) == 3);
  CHECK(region_class({0, 9}) == 3);
}

TEST_CASE("sum categories") {
  CHECK(sum_category(0) == 0);
  CHECK(sum_category(1) == 1);
  CHECK(sum_category(2) == 1);
  CHECK(sum_category(3) == 2);
  CHECK(sum_category(4) == 2);
  CHECK(sum_category(5) == 3);
  CHECK(sum_category(6) == 3);
  CHECK(sum_category(7) == 4);
  CHECK(sum_category(100) == 4);
}

TEST_CASE("baseline context") {
  CoefficientBlock b(8, 8);
  SUBCASE("DC owns its context") {
    b.at(1, 0) = 3;
    b.at(0, 1) = 3;
    CHECK(ctx_baseline(b, {0, 0}) == 0);
  }
  SUBCASE("empty neighbourhood") {
    CHECK(ctx_baseline(b, {3, 3}) == 1 + 2 * kSumCategories);
  }
  SUBCASE("neighbour sum of seven") {
    const Pos p{2, 2};
    const int vals[] = {3, 2, 0, 1, 1};
    for (std::size_t i = 0; i < kBaselineNeighbors.size(); ++i)
      b.at(p.x + kBaselineNeighbors[i].du, p.y + kBaselineNeighbors[i].dv) = vals[i];
    CHECK(neighbor_sum(b, p) == 7);
    CHECK(ctx_baseline(b, p) == 1 + 2 * kSumCategories + 4);
  }
  SUBCASE("neighbours are clipped at three and read zero outside the block") {
    b.at(7, 6) = -40;
    CHECK(neighbor_sum(b, {7, 5}) == 3);
    CHECK(neighbor_sum(b, {7, 7}) == 0);
  }
}

TEST_CASE("context ids stay in range on random blocks") {
  std::mt19937_64 rng(1);
  std::geometric_distribution<int> g(0.5);
  for (int t = 0; t < 200; ++t) {
    CoefficientBlock b(16, 8);
    for (auto& l : b.levels) l = (rng() % 2 ? 1 : -1) * g(rng);
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 16; ++x) {
        const int c = ctx_baseline(b, {x, y});
        CHECK((c >= 0 && c < kBaselineContexts));
        const int lr = ctx_lr(b, {x, y});
        CHECK((lr >= 0 && lr < kLrContexts));
      }
  }
}

}  // namespace
}  // namespace nrec
