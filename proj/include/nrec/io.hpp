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

// File formats: NRTX block containers, PGM images, the NREC coded stream,
// "nrecm/1" model documents and report helpers.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nrec/coefficients.hpp"
#include "nrec/corpus.hpp"
#include "nrec/probability.hpp"
#include "nrec/scheme.hpp"

namespace nrec {

// "NRTX", u8 width, u8 height, u16 LE count, then count row-major int16 LE grids.
struct Int16Grids {
  int width = 0;
  int height = 0;
  std::vector<std::vector<std::int16_t>> grids;
};

std::vector<std::uint8_t> encode_nrtx(const Int16Grids& grids);
Int16Grids decode_nrtx(std::span<const std::uint8_t> bytes);
void write_nrtx(const std::filesystem::path& path, const Int16Grids& grids);
Int16Grids read_nrtx(const std::filesystem::path& path);

Int16Grids to_grids(std::span<const ResidualBlock> blocks);
Int16Grids to_grids(std::span<const CoefficientBlock> blocks);
std::vector<ResidualBlock> to_residuals(const Int16Grids& grids);
std::vector<CoefficientBlock> to_coefficients(const Int16Grids& grids);

// Binary P5 with maxval <= 255.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> pixels, int maxval = 255);

// "NREC", version, shape id, flags, width, height, u32 LE block count, payload.
inline constexpr std::uint8_t kNrecVersion = 1;

struct NrecStream {
  int shape_id = 0;
  bool adaptive = true;
  bool zero_flag = true;
  int width = 0;
  int height = 0;
  std::uint32_t block_count = 0;
  std::vector<std::uint8_t> payload;
};

std::vector<std::uint8_t> encode_nrec(const NrecStream& stream);
NrecStream decode_nrec(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

struct SchemeParams {
  int n_nbd = 0;
  double th_c = 0.0;
  double delta = 0.0;
};

struct ModelDocument {
  int shape_id = 0;
  SchemeParams params;
  Scheme scheme;
  ProbabilityModel model;
};

std::string model_to_json(const ModelDocument& doc);
ModelDocument model_from_json(const std::string& text);

// Diverging grey scale: 128 at zero, 255 at +limit, 0 at -limit.
std::vector<std::uint8_t> diverging_pixels(std::span<const double> values, double limit);
std::string heatmap_svg(int width, int height, std::span<const double> values, double limit);

}  // namespace nrec
