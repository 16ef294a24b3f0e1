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

// Deterministic residual corpora: separable AR(1) fields and block-matched
// frame differences, plus seeded train/test splits.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrec/geometry.hpp"

namespace nrec {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integer residual on the shape's box; cells outside the support are zero.
struct ResidualBlock {
  int width = 0;
  int height = 0;
  std::vector<std::int16_t> samples;  // row-major

  friend bool operator==(const ResidualBlock&, const ResidualBlock&) = default;
};

// Support samples in row-major support order.
std::vector<double> support_samples(const ResidualBlock& block, const Mask& support);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t index);

// Unit-variance separable AR(1) field scaled by sigma: rows are filtered
// first, then columns, both started from the stationary distribution.
std::vector<double> ar1_field(int width, int height, double rho, double sigma, std::uint64_t seed);

struct SyntheticSpec {
  double rho = 0.9;
  double sigma = 20.0;
  std::uint64_t seed = 1;
};

// Block i uses block_seed(spec.seed, i); output does not depend on threads.
std::vector<ResidualBlock> gen_synthetic(const SyntheticSpec& spec, const Mask& shape, int count,
                                         int threads = 1);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct MotionVector {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const MotionVector&, const MotionVector&) = default;
};

struct FrameResiduals {
  std::vector<ResidualBlock> blocks;
  std::vector<MotionVector> motion;
  std::vector<double> source_energy;    // current block energy over the support
  std::vector<double> residual_energy;  // residual energy over the support
};

// Tiles the current frame with the shape's box, finds the best full-search
// match within +-radius (SAD over the support, ties to the smallest |mv|
// then raster order) and keeps current - prediction on the support.
// Throws DataError for frames of different size or smaller than the box.
FrameResiduals gen_from_frames(const GrayImage& current, const GrayImage& reference,
                               const Mask& shape, int radius, int max_blocks = 0);

struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Seeded Fisher-Yates shuffle, then the first round(0.8 n) go to training.
// Throws std::invalid_argument for fewer than 5 items.
DatasetSplit split(std::size_t count, std::uint64_t seed);

template <typename T>
std::vector<T> select(const std::vector<T>& items, std::span<const std::size_t> indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(items[i]);
  return out;
}

}  // namespace nrec
