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

// Wedge-mode region geometry: the AV1 wedge codebook, binary region masks,
// power-of-two bounding boxes, 1:4 subdivision and the canonical shape
// inventory used by every later stage.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nrec {

struct BlockSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const BlockSize&, const BlockSize&) = default;
};

// The nine block sizes that carry a wedge codebook: {8,16,32}^2.
std::span<const BlockSize> wedge_block_sizes();

inline constexpr int kWedgeTypes = 16;

enum class WedgeDirection : std::uint8_t {
  kHorizontal,
  kVertical,
  kOblique27,
  kOblique63,
  kOblique117,
  kOblique153,
};

// Codebook entry: boundary direction plus anchor offsets in eighths of the
// block width / height.
struct WedgeCode {
  WedgeDirection direction;
  int x_offset;
  int y_offset;
};

WedgeCode wedge_code(BlockSize block, int wedge_index);

struct WedgeSpec {
  BlockSize block;
  int wedge_index = 0;
  int region = 0;

  friend bool operator==(const WedgeSpec&, const WedgeSpec&) = default;
};

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Binary support grid, row-major.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool fill = false);

  int width() const { return width_; }
  int height() const { return height_; }
  int box_area() const { return width_ * height_; }
  int area() const;
  double area_ratio() const;

  bool at(int x, int y) const { return cells_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { cells_[index(x, y)] = value ? 1 : 0; }

  bool empty() const { return area() == 0; }
  bool full() const { return area() == box_area(); }
  // 0 < area < width * height.
  bool is_nr() const;

  // Cells outside this mask read as unset.
  Mask crop(const Rect& r) const;
  Mask transposed() const;
  Mask mirrored_h() const;  // x -> width - 1 - x
  Mask mirrored_v() const;  // y -> height - 1 - y
  Mask rotated90() const;   // clockwise
  Mask complement() const;

  // Row-major indices of set cells.
  std::vector<int> support() const;
  std::span<const std::uint8_t> cells() const { return cells_; }
  std::string to_string() const;

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  int index(int x, int y) const { return y * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
};

// Binarized wedge region (weights >= 32 of the 64-level blend belong to it).
Mask wedge_mask(const WedgeSpec& spec);

struct RegionRecord {
  WedgeSpec spec;
  Mask mask;
  bool rectangular = false;
};

// All 16 wedges x 2 regions x 9 block sizes. A region is flagged rectangular
// when its tight extent is completely filled.
std::vector<RegionRecord> enumerate_regions();

// Smallest axis-aligned rectangle containing every set cell. Throws
// std::invalid_argument for an empty mask.
Rect tight_extent(const Mask& mask);

struct BoxedRegion {
  Mask mask;
  int x = 0;  // placement of the box inside the source grid
  int y = 0;
};

// Tight crop with both dimensions rounded up to powers of two. The box is
// anchored at the crop origin and shifted back inside the source grid when
// it would overhang. Throws std::invalid_argument for an empty mask.
BoxedRegion bounding_box(const Mask& mask);

struct Subdivision {
  Rect rect_part;     // fully covered half, relative to the input box
  BoxedRegion nr_part;  // remaining NR half, relative to the input box
};

// Splits a 1:4 box when one power-of-two half along its long axis is entirely
// inside the region; the other half then holds the NR part. Any other input
// (including non-1:4 boxes) yields nullopt.
std::optional<Subdivision> subdivide(const Mask& boxed);

enum class ShapeType : std::uint8_t { kType1 = 1, kType2, kType3, kType4, kType5 };

std::string_view to_string(ShapeType type);
int type_number(ShapeType type);

// True when the mask, normalized to portrait orientation and squashed to a
// square by majority vote along the long axis, matches its transpose or
// anti-transpose up to one boundary diagonal of cells.
bool has_diagonal_symmetry(const Mask& mask);

// Area-ratio bands [0.15,0.35) -> Type1, [0.35,0.65) -> Type2/3,
// [0.65,0.90) -> Type4/5; diagonal symmetry picks the lower type of a pair.
// Throws std::domain_error outside all bands.
ShapeType classify(const Mask& mask);

enum class TransformStep : std::uint8_t {
  kRotate90,
  kMirrorH,
  kMirrorV,
  kTranspose,
  kSubdivideRemainder,
};

std::string_view to_string(TransformStep step);

// Applies the geometric steps of a chain in order; kSubdivideRemainder is a
// provenance marker and leaves the mask unchanged.
Mask apply_chain(const Mask& mask, std::span<const TransformStep> chain);

struct CanonicalForm {
  Mask mask;
  // Chain mapping `mask` back onto the input.
  std::vector<TransformStep> to_input;
};

// Picks a representative of the dihedral orbit: portrait orientation first,
// then the lexicographically largest cell pattern.
CanonicalForm canonical_form(const Mask& mask);

struct CanonicalShape {
  int id = 0;
  Mask mask;
  double r_a = 0.0;
  ShapeType type = ShapeType::kType1;
  int occurrences = 0;

  // Dimensions sorted ascending, e.g. (8,16) for both 8x16 and 16x8.
  BlockSize sorted_box() const;
};

struct RegionMapping {
  WedgeSpec spec;
  bool rectangular = false;
  int shape_id = -1;                   // -1 for rectangular regions
  std::vector<TransformStep> chain;    // canonical mask -> nr box
  BoxedRegion nr_box;                  // NR part placed inside the block
  std::optional<Rect> rect_part;       // split-off rectangle, block coordinates
};

struct ShapeInventory {
  std::vector<CanonicalShape> shapes;
  std::vector<RegionMapping> regions;

  int nr_region_count() const;
  const CanonicalShape& shape(int id) const;
  // Id of the shape whose dihedral orbit contains `mask`, or -1.
  int find(const Mask& mask) const;
};

ShapeInventory canonicalize(const std::vector<RegionRecord>& regions);

// enumerate_regions() followed by canonicalize(), computed once.
const ShapeInventory& default_inventory();

}  // namespace nrec
