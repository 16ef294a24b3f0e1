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

#include "nrec/probability.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "nrec/scan.hpp"

namespace nrec {

namespace {

std::uint64_t total(const BrCounts& c) { return c[0] + c[1] + c[2] + c[3]; }

BrProbabilities estimate(const BrCounts& c, Smoothing smoothing) {
  BrProbabilities p{};
  const double n = static_cast<double>(total(c));
  if (smoothing == Smoothing::kNone) {
    for (int i = 0; i < kBrSymbols; ++i) p[i] = c[i] / n;
    return p;
  }
  const double scale = 1.0 - kBrSymbols * kProbabilityFloor;
  for (int i = 0; i < kBrSymbols; ++i)
    p[i] = kProbabilityFloor + scale * (static_cast<double>(c[i]) + 0.5) / (n + 0.5 * kBrSymbols);
  return p;
}

}  // namespace

CountTable::CountTable(const Scheme& scheme) : tables_(scheme.model_count()) {
  for (int m = 0; m < scheme.model_count(); ++m) tables_[m].assign(scheme.context_count(m), BrCounts{});
}

void CountTable::merge(const CountTable& other) {
  if (other.tables_.size() != tables_.size()) throw std::invalid_argument("count tables differ in shape");
  for (std::size_t m = 0; m < tables_.size(); ++m) {
    if (other.tables_[m].size() != tables_[m].size())
      throw std::invalid_argument("count tables differ in shape");
    for (std::size_t c = 0; c < tables_[m].size(); ++c)
      for (int i = 0; i < kBrSymbols; ++i) tables_[m][c][i] += other.tables_[m][c][i];
  }
}

BrCounts CountTable::global() const {
  BrCounts g{};
  for (const auto& t : tables_)
    for (const BrCounts& c : t)
      for (int i = 0; i < kBrSymbols; ++i) g[i] += c[i];
  return g;
}

std::uint64_t CountTable::total() const { return nrec::total(global()); }

CountTable count_br(const Scheme& scheme, std::span<const CoefficientBlock> blocks) {
  CountTable table(scheme);
  const ScanOrder scan = zigzag(scheme.width(), scheme.height());
  for (const CoefficientBlock& b : blocks) {
    if (b.width != scheme.width() || b.height != scheme.height())
      throw std::invalid_argument("block does not match the scheme dimensions");
    for (int i = 0; i < scan.size(); ++i) {
      const Pos p = scan.coding(i);
      table.add(scheme.context(b, p), std::min(std::abs(b.at(p.x, p.y)), 3));
    }
  }
  return table;
}

ProbabilityModel ProbabilityModel::train(const CountTable& counts, Smoothing smoothing) {
  ProbabilityModel model;
  model.counts_ = counts;
  model.smoothing_ = smoothing;
  const BrCounts g = counts.global();
  const BrProbabilities fallback =
      total(g) == 0 ? BrProbabilities{0.25, 0.25, 0.25, 0.25} : estimate(g, smoothing);
  model.probs_.resize(counts.model_count());
  for (int m = 0; m < counts.model_count(); ++m) {
    const auto table = counts.model(m);
    model.probs_[m].reserve(table.size());
    for (const BrCounts& c : table)
      model.probs_[m].push_back(total(c) == 0 ? fallback : estimate(c, smoothing));
  }
  return model;
}

ProbabilityModel ProbabilityModel::uniform(const Scheme& scheme) {
  ProbabilityModel model;
  model.counts_ = CountTable(scheme);
  model.smoothing_ = Smoothing::kNone;
  model.probs_.resize(scheme.model_count());
  for (int m = 0; m < scheme.model_count(); ++m)
    model.probs_[m].assign(scheme.context_count(m), BrProbabilities{0.25, 0.25, 0.25, 0.25});
  return model;
}

ProbabilityModel train(const Scheme& scheme, std::span<const CoefficientBlock> blocks,
                       Smoothing smoothing) {
  return ProbabilityModel::train(count_br(scheme, blocks), smoothing);
}

double EntropyReport::sum_h_ts() const {
  double s = 0.0;
  for (const PositionEntropy& p : positions) s += p.h_ts();
  return s;
}

EntropyReport eval_hts(const Scheme& scheme, const ProbabilityModel& model,
                       std::span<const CoefficientBlock> test) {
  EntropyReport report{scheme.width(), scheme.height(), {}, 0, 0.0};
  const ScanOrder scan = zigzag(scheme.width(), scheme.height());
  report.positions.resize(scheme.positions());
  for (int y = 0; y < scheme.height(); ++y) {
    for (int x = 0; x < scheme.width(); ++x) {
      PositionEntropy& e = report.positions[y * scheme.width() + x];
      e.pos = {x, y};
      e.rank = scan.rank[y * scheme.width() + x];
    }
  }
  for (const CoefficientBlock& b : test) {
    if (b.width != scheme.width() || b.height != scheme.height())
      throw std::invalid_argument("block does not match the scheme dimensions");
    for (int i = 0; i < scan.size(); ++i) {
      const Pos p = scan.coding(i);
      const int s = std::min(std::abs(b.at(p.x, p.y)), 3);
      const double bits = -std::log2(model.probabilities(scheme.context(b, p))[s]);
      PositionEntropy& e = report.positions[p.y * scheme.width() + p.x];
      e.bits += bits;
      ++e.symbols;
    }
  }
  for (const PositionEntropy& e : report.positions) {
    report.bits += e.bits;
    report.symbols += e.symbols;
  }
  return report;
}

MergedScheme merge_scheme(const Scheme& full, const CountTable& counts, double delta) {
  MergedScheme out;
  std::vector<ContextTree> trees;
  trees.reserve(full.trees().size());
  for (std::size_t t = 0; t < full.trees().size(); ++t) {
    MergeResult r = merge(full.trees()[t], counts.model(static_cast<int>(t)), delta);
    trees.push_back(r.tree);
    out.details.push_back(std::move(r));
  }
  const SchemeKind kind = full.kind() == SchemeKind::kCtf ? SchemeKind::kCtm : full.kind();
  out.scheme = full.with_trees(kind, std::move(trees));
  return out;
}

}  // namespace nrec
