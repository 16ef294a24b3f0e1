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

// Experiment driver: corpus -> sparse transform -> quantization -> split ->
// training -> evaluation -> reports.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrec/corpus.hpp"
#include "nrec/dictionary.hpp"
#include "nrec/geometry.hpp"
#include "nrec/io.hpp"
#include "nrec/probability.hpp"
#include "nrec/scheme.hpp"
#include "nrec/simplified.hpp"
#include "nrec/sparse.hpp"

namespace nrec {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Merge threshold in bits per symbol of the position (or group).
inline constexpr double kDefaultDelta = 1e-3;

struct CorpusConfig {
  std::string source = "synthetic";  // "synthetic" or "frames"
  SyntheticSpec synthetic;
  std::string current_frame;
  std::string reference_frame;
  int radius = 4;
  int blocks_per_shape = 2000;
};

struct ExperimentConfig {
  std::vector<int> shapes;  // empty selects every shape
  CorpusConfig corpus;
  double step = 0.0;  // 0 calibrates to target_bpp
  double target_bpp = 1.0;
  double eps_res = 1e-3;
  int k_max = 0;
  int n_nbd = 4;
  double th_c = 0.2;
  double delta = kDefaultDelta;
  SchemeKind scheme = SchemeKind::kCtm;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int threads = 1;
};

// Missing keys keep their defaults. Throws ConfigError.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);
// Throws ConfigError.
void validate(const ExperimentConfig& config, const ShapeInventory& inventory);

std::vector<int> selected_shapes(const ExperimentConfig& config, const ShapeInventory& inventory);

// Unquantized scaled coefficients t(u,v), one grid per residual.
using RealGrid = std::vector<float>;

std::vector<RealGrid> transform_residuals(const PartitionedDictionary& dict,
                                          std::span<const ResidualBlock> residuals,
                                          const OmpParams& params, int threads = 1);
std::vector<CoefficientBlock> quantize_all(std::span<const RealGrid> grids, int width, int height,
                                           double step);

// Coded bits per support pixel with the adaptive baseline codec.
double coded_bpp(std::span<const CoefficientBlock> blocks, int area);

// Bisection on log(step) so that coded_bpp on the first `sample` grids
// approaches target_bpp.
double calibrate_step(std::span<const RealGrid> grids, int width, int height, int area,
                      double target_bpp, std::size_t sample = 400);

struct ShapeData {
  int shape_id = 0;
  Mask mask;
  PartitionedDictionary dict;
  std::vector<RealGrid> coefficients;
  double step = 1.0;
  std::vector<CoefficientBlock> blocks;
  DatasetSplit split;
  std::vector<CoefficientBlock> train;
  std::vector<CoefficientBlock> test;
};

std::vector<ResidualBlock> make_residuals(const ExperimentConfig& config, const Mask& shape, int shape_id);
ShapeData prepare_shape(const ExperimentConfig& config, const ShapeInventory& inventory, int shape_id);

// Builds a shape's proposed scheme of the requested kind and trains it.
struct TrainedScheme {
  Scheme scheme;
  ProbabilityModel model;
  std::vector<MergeResult> merges;            // ctm / cts only
  std::optional<SimplifiedScheme> simplified;  // cts only
};

TrainedScheme train_scheme(const ShapeData& data, const CanonicalShape& shape, SchemeKind kind,
                           int n_nbd, double th_c, double delta);

struct PositionDelta {
  Pos pos;
  int rank = 0;
  double h_base = 0.0;
  double h_prop = 0.0;
  double delta = 0.0;  // h_base - h_prop, positive is a gain
  bool top_left = false;
  std::uint64_t symbols = 0;
};

struct Comparison {
  int width = 0;
  int height = 0;
  std::vector<PositionDelta> rows;  // row-major
  double dh = 0.0;
  double dh_tl = 0.0;
  int np = 0;
  int np_tl = 0;
};

// Top-left region: x + y < max(width, height). Throws std::invalid_argument
// when the position sets differ.
Comparison compare(const EntropyReport& base, const EntropyReport& prop);

struct ShapeResult {
  int shape_id = 0;
  ShapeType type = ShapeType::kType1;
  BlockSize box;
  double step = 0.0;
  double bpp = 0.0;
  SchemeKind kind = SchemeKind::kCtm;
  TrainedScheme baseline;
  TrainedScheme proposed;
  EntropyReport base_report;
  EntropyReport prop_report;
  Comparison comparison;
  double ctx_per_model = 0.0;
  int ctx_total = 0;
  int ctx_total_without_c1 = 0;
};

ShapeResult evaluate_shape(const ShapeData& data, const CanonicalShape& shape,
                           const ExperimentConfig& config);

struct SweepPoint {
  int n_nbd = 0;
  double th_c = 0.0;
  double total_h = 0.0;  // sum of per-position CT-m H_ts over all shapes
};

struct SweepResult {
  std::vector<SweepPoint> points;
  SweepPoint best;
  bool reference_wins = false;  // (4, 0.2)
};

inline constexpr int kSweepNbd[] = {2, 3, 4};
inline constexpr double kSweepThc[] = {0.09, 0.15, 0.2, 0.25};

// Deterministic argmin; ties within 1e-12 go to smaller n_nbd, then th_c.
SweepResult sweep(std::span<const ShapeData> shapes, double delta);

// Report text.
std::string entropy_csv(const EntropyReport& report, int shape_id, ShapeType type, SchemeKind kind,
                        std::uint64_t hash);
std::string comparison_csv(const Comparison& c, int shape_id, ShapeType type, std::uint64_t hash);
std::string summary_csv(std::span<const ShapeResult> results, std::uint64_t hash);
std::string sweep_csv(const SweepResult& result, std::uint64_t hash);

// Parses entropy_csv output back into a report.
EntropyReport parse_entropy_csv(const std::string& text);

inline constexpr double kHeatmapLimit = 0.5;

// Writes every report of a run into config.output_dir.
std::vector<ShapeResult> run_pipeline(const ExperimentConfig& config);

}  // namespace nrec
