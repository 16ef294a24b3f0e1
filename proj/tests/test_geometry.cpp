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

#include <algorithm>
#include <set>
#include <stdexcept>

#include "nrec/geometry.hpp"

namespace nrec {
namespace {

Mask region(int w, int h, int wedge, int side) { return wedge_mask({{w, h}, wedge, side}); }

// Pastes `part` into a w x h grid at (x, y).
Mask placed(const Mask& part, int x, int y, int w, int h) {
  Mask out(w, h);
  for (int j = 0; j < part.height(); ++j)
    for (int i = 0; i < part.width(); ++i)
      if (part.at(i, j)) out.set(x + i, y + j, true);
  return out;
}

TEST_CASE("region enumeration counts") {
  const auto regions = enumerate_regions();
  CHECK(regions.size() == 288);
  const auto rect = std::count_if(regions.begin(), regions.end(),
                                  [](const RegionRecord& r) { return r.rectangular; });
  CHECK(rect == 72);
  CHECK(regions.size() - rect == 216);
}

TEST_CASE("the two regions of a wedge partition the block") {
  for (BlockSize b : wedge_block_sizes()) {
    for (int w = 0; w < kWedgeTypes; ++w) {
      const Mask a = region(b.width, b.height, w, 0);
      const Mask c = region(b.width, b.height, w, 1);
      CHECK(a == c.complement());
      CHECK(a.area() + c.area() == b.width * b.height);
    }
  }
}

TEST_CASE("vertical centre wedge covers the left half") {
  const Mask m = region(8, 16, 7, 0);
  CHECK(m.area() == 64);
  const Mask other = region(8, 16, 7, 1);
  // One of the two regions is exactly the left 4 columns.
  const Mask& left = m.at(0, 0) ? m : other;
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 8; ++x) CHECK(left.at(x, y) == (x < 4));
}

TEST_CASE("bounding box rounds each side up to a power of two") {
  Mask tri(16, 16);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 16 - 2 * y; ++x) tri.set(x, y, true);
  const BoxedRegion b = bounding_box(tri);
  CHECK(b.mask.width() == 16);
  CHECK(b.mask.height() == 8);

  Mask band(16, 16);
  for (int y = 3; y < 8; ++y)
    for (int x = 0; x < 16 - (y - 3); ++x) band.set(x, y, true);
  CHECK(tight_extent(band).height == 5);
  const BoxedRegion b2 = bounding_box(band);
  CHECK(b2.mask.width() == 16);
  CHECK(b2.mask.height() == 8);
  CHECK(b2.mask.area() == band.area());
}

TEST_CASE("subdivision of 1:4 boxes") {
  SUBCASE("square boxes are never subdivided") {
    CHECK_FALSE(subdivide(region(16, 16, 2, 0)).has_value());
    CHECK_FALSE(subdivide(region(8, 8, 4, 1)).has_value());
  }
  SUBCASE("matches a direct half test on every 8x32 and 32x8 region") {
    int split_count = 0;
    for (const RegionRecord& r : enumerate_regions()) {
      const BlockSize b = r.spec.block;
      if (r.rectangular || std::max(b.width, b.height) != 4 * std::min(b.width, b.height)) continue;
      const bool tall = b.height > b.width;
      const Rect top = tall ? Rect{0, 0, b.width, b.height / 2} : Rect{0, 0, b.width / 2, b.height};
      const Rect bot = tall ? Rect{0, b.height / 2, b.width, b.height / 2}
                            : Rect{b.width / 2, 0, b.width / 2, b.height};
      const bool expect = (r.mask.crop(top).full() && r.mask.crop(bot).is_nr()) ||
                          (r.mask.crop(bot).full() && r.mask.crop(top).is_nr());
      const auto sub = subdivide(r.mask);
      CHECK(sub.has_value() == expect);
      if (sub) {
        ++split_count;
        CHECK(r.mask.crop(sub->rect_part).full());
        CHECK(sub->nr_part.mask.is_nr());
        CHECK(sub->nr_part.mask.area() + sub->rect_part.width * sub->rect_part.height ==
              r.mask.area());
      }
    }
    CHECK(split_count > 0);
  }
}

TEST_CASE("shape type bands") {
  CHECK(classify(region(16, 8, 9, 1)) == ShapeType::kType1);
  CHECK(classify(region(8, 16, 2, 1)) == ShapeType::kType2);
  CHECK(classify(region(8, 16, 0, 1)) == ShapeType::kType3);
  CHECK(classify(bounding_box(region(8, 16, 14, 0)).mask) == ShapeType::kType4);
  CHECK(classify(bounding_box(region(8, 16, 10, 0)).mask) == ShapeType::kType5);

  Mask nearly_full(8, 8, true);
  nearly_full.set(0, 0, false);
  CHECK_THROWS_AS(classify(nearly_full), std::domain_error);
  Mask sliver(8, 8);
  sliver.set(0, 0, true);
  CHECK_THROWS_AS(classify(sliver), std::domain_error);
}

TEST_CASE("diagonal symmetry tolerates a one-cell staircase per row") {
  Mask tri(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x <= y; ++x) tri.set(x, y, true);
  CHECK(has_diagonal_symmetry(tri));
  Mask stripe(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 3; ++x) stripe.set(x, y, true);
  for (int y = 0; y < 2; ++y)
    for (int x = 3; x < 8; ++x) stripe.set(x, y, true);
  CHECK_FALSE(has_diagonal_symmetry(stripe));
}

TEST_CASE("mask transforms") {
  Mask m(4, 8);
  m.set(1, 2, true);
  m.set(3, 7, true);
  CHECK(m.transposed().transposed() == m);
  CHECK(m.mirrored_h().mirrored_h() == m);
  CHECK(m.mirrored_v().mirrored_v() == m);
  CHECK(m.rotated90().rotated90().rotated90().rotated90() == m);
  CHECK(m.rotated90().width() == 8);
  CHECK(m.complement().area() == 32 - 2);
  CHECK(m.support() == std::vector<int>{2 * 4 + 1, 7 * 4 + 3});
}

TEST_CASE("canonical form is idempotent and invertible") {
  const ShapeInventory& inv = default_inventory();
  for (const CanonicalShape& s : inv.shapes) {
    const CanonicalForm again = canonical_form(s.mask);
    CHECK(again.mask == s.mask);
    CHECK(inv.find(s.mask) == s.id);
    CHECK(inv.find(s.mask.transposed()) == s.id);
    CHECK(inv.find(s.mask.mirrored_h()) == s.id);
    CHECK(inv.find(s.mask.rotated90()) == s.id);
    CHECK(s.mask.height() >= s.mask.width());
  }
  for (const RegionRecord& r : enumerate_regions()) {
    const CanonicalForm c = canonical_form(r.mask);
    CHECK(apply_chain(c.mask, c.to_input) == r.mask);
  }
}

TEST_CASE("region mappings rebuild the original region") {
  const ShapeInventory& inv = default_inventory();
  CHECK(inv.regions.size() == 288);
  CHECK(inv.nr_region_count() == 216);
  int occurrences = 0;
  for (const CanonicalShape& s : inv.shapes) occurrences += s.occurrences;
  CHECK(occurrences == 216);

  for (const RegionMapping& m : inv.regions) {
    const Mask original = wedge_mask(m.spec);
    if (m.rectangular) {
      CHECK(m.shape_id == -1);
      continue;
    }
    REQUIRE(m.shape_id >= 0);
    const Mask nr = apply_chain(inv.shape(m.shape_id).mask, m.chain);
    CHECK(nr == m.nr_box.mask);
    const int w = m.spec.block.width;
    const int h = m.spec.block.height;
    Mask rebuilt = placed(nr, m.nr_box.x, m.nr_box.y, w, h);
    if (m.rect_part) {
      const Rect& r = *m.rect_part;
      for (int y = r.y; y < r.y + r.height; ++y)
        for (int x = r.x; x < r.x + r.width; ++x) rebuilt.set(x, y, true);
    }
    CHECK(rebuilt == original);
  }
}

TEST_CASE("inventory shapes are distinct NR masks with consistent metadata") {
  const ShapeInventory& inv = default_inventory();
  std::set<std::string> seen;
  for (const CanonicalShape& s : inv.shapes) {
    CHECK(s.mask.is_nr());
    CHECK(seen.insert(s.mask.to_string()).second);
    CHECK(s.r_a == doctest::Approx(s.mask.area_ratio()));
    CHECK(s.type == classify(s.mask));
    const BlockSize b = s.sorted_box();
    CHECK(b.width <= b.height);
    for (int side : {b.width, b.height}) CHECK((side & (side - 1)) == 0);
  }
}

TEST_CASE("Type-2 exemplar has a 1:2 box at half area") {
  const ShapeInventory& inv = default_inventory();
  const int id = inv.find(bounding_box(region(8, 16, 2, 1)).mask);
  REQUIRE(id >= 0);
  const CanonicalShape& s = inv.shape(id);
  CHECK(s.sorted_box() == BlockSize{8, 16});
  CHECK(s.r_a == doctest::Approx(0.5));
  CHECK(s.type == ShapeType::kType2);
}

}  // namespace
}  // namespace nrec
