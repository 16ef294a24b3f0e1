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

#include "nrec/geometry.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <tuple>

namespace nrec {
namespace {

constexpr int kMasterSize = 64;
constexpr int kMaskMax = 64;
constexpr int kRegionThreshold = 32;

constexpr std::array<int, kMasterSize> kMasterObliqueOdd = {
    0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,
    0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  2,  6,  18,
    37, 53, 60, 63, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64,
    64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64};

constexpr std::array<int, kMasterSize> kMasterObliqueEven = {
    0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,
    0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  1,  4,  11, 27,
    46, 58, 62, 63, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64,
    64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64};

constexpr std::array<int, kMasterSize> kMasterVertical = {
    0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,
    0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  2,  7,  21,
    43, 57, 62, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64,
    64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64, 64};

using D = WedgeDirection;

// Indexed by block shape: 0 tall (h > w), 1 wide (w > h), 2 square.
constexpr WedgeCode kCodebook[3][kWedgeTypes] = {
    {{D::kOblique27, 4, 4}, {D::kOblique63, 4, 4}, {D::kOblique117, 4, 4},
     {D::kOblique153, 4, 4}, {D::kHorizontal, 4, 2}, {D::kHorizontal, 4, 4},
     {D::kHorizontal, 4, 6}, {D::kVertical, 4, 4}, {D::kOblique27, 4, 2},
     {D::kOblique27, 4, 6}, {D::kOblique153, 4, 2}, {D::kOblique153, 4, 6},
     {D::kOblique63, 2, 4}, {D::kOblique63, 6, 4}, {D::kOblique117, 2, 4},
     {D::kOblique117, 6, 4}},
    {{D::kOblique27, 4, 4}, {D::kOblique63, 4, 4}, {D::kOblique117, 4, 4},
     {D::kOblique153, 4, 4}, {D::kVertical, 2, 4}, {D::kVertical, 4, 4},
     {D::kVertical, 6, 4}, {D::kHorizontal, 4, 4}, {D::kOblique27, 4, 2},
     {D::kOblique27, 4, 6}, {D::kOblique153, 4, 2}, {D::kOblique153, 4, 6},
     {D::kOblique63, 2, 4}, {D::kOblique63, 6, 4}, {D::kOblique117, 2, 4},
     {D::kOblique117, 6, 4}},
    {{D::kOblique27, 4, 4}, {D::kOblique63, 4, 4}, {D::kOblique117, 4, 4},
     {D::kOblique153, 4, 4}, {D::kHorizontal, 4, 2}, {D::kHorizontal, 4, 6},
     {D::kVertical, 2, 4}, {D::kVertical, 6, 4}, {D::kOblique27, 4, 2},
     {D::kOblique27, 4, 6}, {D::kOblique153, 4, 2}, {D::kOblique153, 4, 6},
     {D::kOblique63, 2, 4}, {D::kOblique63, 6, 4}, {D::kOblique117, 2, 4},
     {D::kOblique117, 6, 4}},
};

constexpr std::array<BlockSize, 9> kWedgeBlockSizes = {{
    {8, 8}, {8, 16}, {16, 8}, {16, 16}, {16, 32},
    {32, 16}, {32, 32}, {8, 32}, {32, 8},
}};

using MasterGrid = std::array<std::array<int, kMasterSize>, kMasterSize>;

// 64x64 blending masters per direction, laid out [row][col].
const std::array<MasterGrid, 6>& master_masks() {
  static const std::array<MasterGrid, 6> masters = [] {
    std::array<MasterGrid, 6> m{};
    auto& o63 = m[static_cast<int>(D::kOblique63)];
    auto& vert = m[static_cast<int>(D::kVertical)];
    for (int j = 0; j < kMasterSize; ++j) {
      int shift = kMasterSize / 4;
      for (int i = 0; i < kMasterSize; i += 2) {
        o63[i][j] = kMasterObliqueEven[std::clamp(j - shift, 0, kMasterSize - 1)];
        shift -= 1;
        o63[i + 1][j] = kMasterObliqueOdd[std::clamp(j - shift, 0, kMasterSize - 1)];
        vert[i][j] = kMasterVertical[j];
        vert[i + 1][j] = kMasterVertical[j];
      }
    }
    const int w = kMasterSize;
    for (int i = 0; i < kMasterSize; ++i) {
      for (int j = 0; j < kMasterSize; ++j) {
        const int msk = o63[i][j];
        m[static_cast<int>(D::kOblique27)][j][i] = msk;
        m[static_cast<int>(D::kOblique117)][i][w - 1 - j] = kMaskMax - msk;
        m[static_cast<int>(D::kOblique153)][w - 1 - j][i] = kMaskMax - msk;
        m[static_cast<int>(D::kHorizontal)][j][i] = vert[i][j];
      }
    }
    return m;
  }();
  return masters;
}

int block_shape_class(BlockSize b) {
  if (b.height > b.width) return 0;
  if (b.height < b.width) return 1;
  return 2;
}

bool is_wedge_block(BlockSize b) {
  return std::find(kWedgeBlockSizes.begin(), kWedgeBlockSizes.end(), b) !=
         kWedgeBlockSizes.end();
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Key ordering used for the canonical representative.
auto orientation_key(const Mask& m) {
  return std::make_tuple(m.width() <= m.height(), std::vector<std::uint8_t>(m.cells().begin(), m.cells().end()));
}

const std::array<std::vector<TransformStep>, 8>& dihedral_chains() {
  using T = TransformStep;
  static const std::array<std::vector<TransformStep>, 8> chains = {{
      {},
      {T::kMirrorH},
      {T::kMirrorV},
      {T::kMirrorH, T::kMirrorV},
      {T::kTranspose},
      {T::kTranspose, T::kMirrorH},
      {T::kTranspose, T::kMirrorV},
      {T::kTranspose, T::kMirrorH, T::kMirrorV},
  }};
  return chains;
}

}  // namespace

std::span<const BlockSize> wedge_block_sizes() { return kWedgeBlockSizes; }

WedgeCode wedge_code(BlockSize block, int wedge_index) {
  if (!is_wedge_block(block) || wedge_index < 0 || wedge_index >= kWedgeTypes) {
    throw std::invalid_argument("no wedge codebook entry for this block/index");
  }
  return kCodebook[block_shape_class(block)][wedge_index];
}

// ---------------------------------------------------------------------------
// Mask

Mask::Mask(int width, int height, bool fill)
    : width_(width), height_(height),
      cells_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {
  if (width < 0 || height < 0) throw std::invalid_argument("negative mask size");
}

int Mask::area() const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), 1));
}

double Mask::area_ratio() const {
  return box_area() == 0 ? 0.0 : static_cast<double>(area()) / box_area();
}

bool Mask::is_nr() const {
  const int a = area();
  return a > 0 && a < box_area();
}

Mask Mask::crop(const Rect& r) const {
  Mask out(r.width, r.height);
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      const int sx = r.x + x;
      const int sy = r.y + y;
      if (sx >= 0 && sy >= 0 && sx < width_ && sy < height_) out.set(x, y, at(sx, sy));
    }
  }
  return out;
}

Mask Mask::transposed() const {
  Mask out(height_, width_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set(y, x, at(x, y));
  return out;
}

Mask Mask::mirrored_h() const {
  Mask out(width_, height_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set(width_ - 1 - x, y, at(x, y));
  return out;
}

Mask Mask::mirrored_v() const {
  Mask out(width_, height_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set(x, height_ - 1 - y, at(x, y));
  return out;
}

Mask Mask::rotated90() const {
  Mask out(height_, width_);
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x) out.set(height_ - 1 - y, x, at(x, y));
  return out;
}

Mask Mask::complement() const {
  Mask out = *this;
  for (auto& c : out.cells_) c = c ? 0 : 1;
  return out;
}

std::vector<int> Mask::support() const {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
    if (cells_[i]) idx.push_back(i);
  return idx;
}

std::string Mask::to_string() const {
  std::string s;
  s.reserve(static_cast<std::size_t>(height_) * (width_ + 1));
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) s.push_back(at(x, y) ? '1' : '0');
    s.push_back('\n');
  }
  return s;
}

// ---------------------------------------------------------------------------
// Wedge regions

Mask wedge_mask(const WedgeSpec& spec) {
  if (spec.region != 0 && spec.region != 1) throw std::invalid_argument("region must be 0 or 1");
  const WedgeCode code = wedge_code(spec.block, spec.wedge_index);
  const auto& master = master_masks()[static_cast<int>(code.direction)];
  const int w = spec.block.width;
  const int h = spec.block.height;
  const int xoff = kMasterSize / 2 - ((code.x_offset * w) >> 3);
  const int yoff = kMasterSize / 2 - ((code.y_offset * h) >> 3);

  // Sign selection follows the codec: the region whose weights average below
  // 32 along the top and left edges becomes region 1.
  int sum = 0;
  for (int i = 0; i < w; ++i) sum += master[yoff][xoff + i];
  for (int i = 1; i < h; ++i) sum += master[yoff + i][xoff];
  const int avg = (sum + (w + h - 1) / 2) / (w + h - 1);
  const int flip = avg < 32 ? 1 : 0;

  Mask out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int weight = master[yoff + y][xoff + x];
      const int region_weight = spec.region == flip ? weight : kMaskMax - weight;
      out.set(x, y, region_weight >= kRegionThreshold);
    }
  }
  return out;
}

std::vector<RegionRecord> enumerate_regions() {
  std::vector<RegionRecord> out;
  out.reserve(kWedgeBlockSizes.size() * kWedgeTypes * 2);
  for (const BlockSize& b : kWedgeBlockSizes) {
    for (int k = 0; k < kWedgeTypes; ++k) {
      for (int r = 0; r < 2; ++r) {
        RegionRecord rec{{b, k, r}, wedge_mask({b, k, r}), false};
        rec.rectangular = !rec.mask.empty() && rec.mask.crop(tight_extent(rec.mask)).full();
        out.push_back(std::move(rec));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Boxes and subdivision

Rect tight_extent(const Mask& mask) {
  int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) throw std::invalid_argument("tight_extent of an empty mask");
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

BoxedRegion bounding_box(const Mask& mask) {
  const Rect t = tight_extent(mask);
  const int w = next_pow2(t.width);
  const int h = next_pow2(t.height);
  int x = t.x;
  int y = t.y;
  if (x + w > mask.width()) x = std::max(0, mask.width() - w);
  if (y + h > mask.height()) y = std::max(0, mask.height() - h);
  return {mask.crop({x, y, w, h}), x, y};
}

std::optional<Subdivision> subdivide(const Mask& boxed) {
  const int w = boxed.width();
  const int h = boxed.height();
  const bool tall = h == 4 * w;
  const bool wide = w == 4 * h;
  if (!tall && !wide) return std::nullopt;

  const Rect first = tall ? Rect{0, 0, w, h / 2} : Rect{0, 0, w / 2, h};
  const Rect second = tall ? Rect{0, h / 2, w, h / 2} : Rect{w / 2, 0, w / 2, h};
  for (const auto& [full_half, rest] : {std::pair{first, second}, std::pair{second, first}}) {
    const Mask covered = boxed.crop(full_half);
    const Mask remainder = boxed.crop(rest);
    if (covered.full() && remainder.is_nr()) {
      BoxedRegion nr = bounding_box(remainder);
      nr.x += rest.x;
      nr.y += rest.y;
      return Subdivision{full_half, std::move(nr)};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classification

std::string_view to_string(ShapeType type) {
  switch (type) {
    case ShapeType::kType1: return "Type1";
    case ShapeType::kType2: return "Type2";
    case ShapeType::kType3: return "Type3";
    case ShapeType::kType4: return "Type4";
    case ShapeType::kType5: return "Type5";
  }
  return "?";
}

int type_number(ShapeType type) { return static_cast<int>(type); }

bool has_diagonal_symmetry(const Mask& mask) {
  const Mask portrait = mask.width() > mask.height() ? mask.transposed() : mask;
  const int s = portrait.width();
  const int f = portrait.height() / s;
  Mask sq(s, s);
  for (int y = 0; y < s; ++y) {
    for (int x = 0; x < s; ++x) {
      int votes = 0;
      for (int k = 0; k < f; ++k) votes += portrait.at(x, y * f + k) ? 1 : 0;
      sq.set(x, y, 2 * votes >= f);
    }
  }
  int diff_t = 0;
  int diff_a = 0;
  for (int y = 0; y < s; ++y) {
    for (int x = 0; x < s; ++x) {
      diff_t += sq.at(x, y) != sq.at(y, x);
      diff_a += sq.at(x, y) != sq.at(s - 1 - y, s - 1 - x);
    }
  }
  return std::min(diff_t, diff_a) <= s;
}

ShapeType classify(const Mask& mask) {
  const double r = mask.area_ratio();
  if (r >= 0.15 && r < 0.35) return ShapeType::kType1;
  if (r >= 0.35 && r < 0.65)
    return has_diagonal_symmetry(mask) ? ShapeType::kType2 : ShapeType::kType3;
  if (r >= 0.65 && r < 0.90)
    return has_diagonal_symmetry(mask) ? ShapeType::kType4 : ShapeType::kType5;
  throw std::domain_error("area ratio outside every shape-type band");
}

// ---------------------------------------------------------------------------
// Canonicalization

std::string_view to_string(TransformStep step) {
  switch (step) {
    case TransformStep::kRotate90: return "rotate90";
    case TransformStep::kMirrorH: return "mirrorH";
    case TransformStep::kMirrorV: return "mirrorV";
    case TransformStep::kTranspose: return "transpose";
    case TransformStep::kSubdivideRemainder: return "subdivide-remainder";
  }
  return "?";
}

Mask apply_chain(const Mask& mask, std::span<const TransformStep> chain) {
  Mask m = mask;
  for (TransformStep step : chain) {
    switch (step) {
      case TransformStep::kRotate90: m = m.rotated90(); break;
      case TransformStep::kMirrorH: m = m.mirrored_h(); break;
      case TransformStep::kMirrorV: m = m.mirrored_v(); break;
      case TransformStep::kTranspose: m = m.transposed(); break;
      case TransformStep::kSubdivideRemainder: break;
    }
  }
  return m;
}

CanonicalForm canonical_form(const Mask& mask) {
  const Mask* best = nullptr;
  std::array<Mask, 8> images;
  for (std::size_t i = 0; i < images.size(); ++i) {
    images[i] = apply_chain(mask, dihedral_chains()[i]);
    if (best == nullptr || orientation_key(images[i]) > orientation_key(*best)) best = &images[i];
  }
  CanonicalForm out{*best, {}};
  for (const auto& chain : dihedral_chains()) {
    if (apply_chain(out.mask, chain) == mask) {
      out.to_input = chain;
      break;
    }
  }
  return out;
}

BlockSize CanonicalShape::sorted_box() const {
  return {std::min(mask.width(), mask.height()), std::max(mask.width(), mask.height())};
}

int ShapeInventory::nr_region_count() const {
  return static_cast<int>(std::count_if(regions.begin(), regions.end(),
                                        [](const RegionMapping& r) { return !r.rectangular; }));
}

const CanonicalShape& ShapeInventory::shape(int id) const {
  if (id < 0 || id >= static_cast<int>(shapes.size())) throw std::out_of_range("unknown shape id");
  return shapes[id];
}

int ShapeInventory::find(const Mask& mask) const {
  const Mask c = canonical_form(mask).mask;
  for (const auto& s : shapes)
    if (s.mask == c) return s.id;
  return -1;
}

ShapeInventory canonicalize(const std::vector<RegionRecord>& regions) {
  ShapeInventory inv;
  std::vector<Mask> canon_masks;
  std::vector<int> provisional;

  for (const auto& rec : regions) {
    RegionMapping map;
    map.spec = rec.spec;
    map.rectangular = rec.rectangular || !rec.mask.is_nr();
    if (map.rectangular) {
      inv.regions.push_back(std::move(map));
      provisional.push_back(-1);
      continue;
    }
    BoxedRegion box = bounding_box(rec.mask);
    bool split = false;
    if (auto sub = subdivide(box.mask)) {
      map.rect_part = Rect{box.x + sub->rect_part.x, box.y + sub->rect_part.y,
                           sub->rect_part.width, sub->rect_part.height};
      box = BoxedRegion{sub->nr_part.mask, box.x + sub->nr_part.x, box.y + sub->nr_part.y};
      split = true;
    }
    CanonicalForm cf = canonical_form(box.mask);
    auto it = std::find(canon_masks.begin(), canon_masks.end(), cf.mask);
    int slot = static_cast<int>(it - canon_masks.begin());
    if (it == canon_masks.end()) canon_masks.push_back(cf.mask);
    map.chain = cf.to_input;
    if (split) map.chain.push_back(TransformStep::kSubdivideRemainder);
    map.nr_box = std::move(box);
    inv.regions.push_back(std::move(map));
    provisional.push_back(slot);
  }

  // Stable ids: ordered by sorted box, then area ratio, then cell pattern.
  std::vector<int> order(canon_masks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  auto sort_key = [&](int i) {
    const Mask& m = canon_masks[i];
    return std::make_tuple(std::min(m.width(), m.height()), std::max(m.width(), m.height()),
                           m.area(), std::vector<std::uint8_t>(m.cells().begin(), m.cells().end()));
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) { return sort_key(a) < sort_key(b); });
  std::vector<int> id_of(canon_masks.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const int slot = order[rank];
    id_of[slot] = static_cast<int>(rank);
    CanonicalShape s;
    s.id = static_cast<int>(rank);
    s.mask = canon_masks[slot];
    s.r_a = s.mask.area_ratio();
    s.type = classify(s.mask);
    inv.shapes.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < inv.regions.size(); ++i) {
    if (provisional[i] < 0) continue;
    inv.regions[i].shape_id = id_of[provisional[i]];
    ++inv.shapes[inv.regions[i].shape_id].occurrences;
  }
  return inv;
}

const ShapeInventory& default_inventory() {
  static const ShapeInventory inv = canonicalize(enumerate_regions());
  return inv;
}

}  // namespace nrec
