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

// BR symbol statistics: counting in coding order, smoothed conditional
// probabilities and cross conditional entropy on held-out blocks.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "nrec/coefficients.hpp"
#include "nrec/context_tree.hpp"
#include "nrec/scheme.hpp"

namespace nrec {

class CountTable {
 public:
  CountTable() = default;
  explicit CountTable(const Scheme& scheme);
  explicit CountTable(std::vector<std::vector<BrCounts>> tables) : tables_(std::move(tables)) {}

  void add(ContextRef ref, int symbol) { ++tables_[ref.model][ref.ctx][symbol]; }
  // Counts are additive; merging partial tables in any order gives the same result.
  void merge(const CountTable& other);

  int model_count() const { return static_cast<int>(tables_.size()); }
  std::span<const BrCounts> model(int m) const { return tables_[m]; }
  const BrCounts& at(ContextRef ref) const { return tables_[ref.model][ref.ctx]; }
  BrCounts global() const;
  std::uint64_t total() const;

  friend bool operator==(const CountTable&, const CountTable&) = default;

 private:
  std::vector<std::vector<BrCounts>> tables_;
};

// Every position of every block, visited in reverse zig-zag order.
CountTable count_br(const Scheme& scheme, std::span<const CoefficientBlock> blocks);

enum class Smoothing : std::uint8_t {
  kNone,  // maximum likelihood
  kKt,    // add one half, then a 2^-15 floor
};

inline constexpr double kProbabilityFloor = 1.0 / 32768.0;

using BrProbabilities = std::array<double, kBrSymbols>;

class ProbabilityModel {
 public:
  ProbabilityModel() = default;
  // Contexts without training data use the distribution of all counts.
  static ProbabilityModel train(const CountTable& counts, Smoothing smoothing = Smoothing::kKt);
  static ProbabilityModel uniform(const Scheme& scheme);

  const BrProbabilities& probabilities(ContextRef ref) const { return probs_[ref.model][ref.ctx]; }
  const CountTable& counts() const { return counts_; }
  Smoothing smoothing() const { return smoothing_; }
  int model_count() const { return static_cast<int>(probs_.size()); }
  int context_count(int model) const { return static_cast<int>(probs_[model].size()); }

 private:
  CountTable counts_;
  Smoothing smoothing_ = Smoothing::kKt;
  std::vector<std::vector<BrProbabilities>> probs_;
};

ProbabilityModel train(const Scheme& scheme, std::span<const CoefficientBlock> blocks,
                       Smoothing smoothing = Smoothing::kKt);

struct PositionEntropy {
  Pos pos;
  int rank = 0;  // zig-zag rank
  std::uint64_t symbols = 0;
  double bits = 0.0;

  double h_ts() const { return symbols == 0 ? 0.0 : bits / static_cast<double>(symbols); }
};

struct EntropyReport {
  int width = 0;
  int height = 0;
  std::vector<PositionEntropy> positions;  // row-major
  std::uint64_t symbols = 0;
  double bits = 0.0;

  double mean_bits() const { return symbols == 0 ? 0.0 : bits / static_cast<double>(symbols); }
  // Sum of the per-position H_ts values.
  double sum_h_ts() const;
};

// H_ts = -sum p_ts(i,j) log2 p_tr(i|j), per position.
EntropyReport eval_hts(const Scheme& scheme, const ProbabilityModel& model,
                       std::span<const CoefficientBlock> test);

// CT-m from a full scheme: each tree merged against its own counts.
struct MergedScheme {
  Scheme scheme;
  std::vector<MergeResult> details;  // per tree
};

MergedScheme merge_scheme(const Scheme& full, const CountTable& counts, double delta);

}  // namespace nrec
