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

// Partitioned DCT dictionaries: every 2D DCT-II basis image of the bounding
// box restricted to an NR support and renormalized.

#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "nrec/geometry.hpp"

namespace nrec {

// Orthonormal DCT-II matrix; row k holds frequency k sampled at n = 0..size-1.
Eigen::MatrixXd dct_matrix(int size);

// Frequency position on the coefficient grid: u horizontal, v vertical.
struct Freq {
  int u = 0;
  int v = 0;

  friend bool operator==(const Freq&, const Freq&) = default;
};

struct Offset {
  int du = 0;
  int dv = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
  friend auto operator<=>(const Offset&, const Offset&) = default;
};

inline constexpr double kDegenerateNorm = 1e-12;

class PartitionedDictionary {
 public:
  explicit PartitionedDictionary(const Mask& support);

  int width() const { return support_mask_.width(); }
  int height() const { return support_mask_.height(); }
  int atom_count() const { return width() * height(); }
  int support_size() const { return static_cast<int>(support_.size()); }
  const Mask& support_mask() const { return support_mask_; }
  // Row-major pixel indices of the support inside the box.
  const std::vector<int>& support() const { return support_; }

  int index(Freq f) const { return f.v * width() + f.u; }
  Freq freq(int index) const { return {index % width(), index / width()}; }
  bool contains(Freq f) const { return f.u >= 0 && f.v >= 0 && f.u < width() && f.v < height(); }

  // support_size x atom_count; unit-norm columns, zero columns for degenerate atoms.
  const Eigen::MatrixXd& atoms() const { return atoms_; }
  double restriction_norm(int k) const { return norms_[k]; }
  const Eigen::VectorXd& restriction_norms() const { return norms_; }
  bool degenerate(int k) const { return norms_[k] < kDegenerateNorm; }

  double inner(int a, int b) const { return atoms_.col(a).dot(atoms_.col(b)); }
  double correlation(int a, int b) const;

  // Built on first use and shared between copies.
  const Eigen::MatrixXd& gram() const;

  const Eigen::MatrixXd& dct_x() const { return dct_x_; }
  const Eigen::MatrixXd& dct_y() const { return dct_y_; }

 private:
  struct GramCache;

  Mask support_mask_;
  std::vector<int> support_;
  Eigen::MatrixXd dct_x_;
  Eigen::MatrixXd dct_y_;
  Eigen::MatrixXd atoms_;
  Eigen::VectorXd norms_;
  std::shared_ptr<GramCache> gram_;
};

// |<atom(center), atom(center + offset)>| over a (2r+1)^2 window; NaN where
// the neighbour falls outside the box.
struct CorrelationMap {
  Freq center;
  int radius = 0;
  std::vector<double> values;  // row-major over (dv, du)

  int side() const { return 2 * radius + 1; }
  double at(int du, int dv) const { return values[(dv + radius) * side() + (du + radius)]; }
};

CorrelationMap correlation_map(const PartitionedDictionary& dict, Freq center, int radius);

// Mean |corr| at odd l1 offsets over the mean at even non-zero offsets, or
// its reciprocal, whichever is larger.
double checkerboard_ratio(const CorrelationMap& map);

// {(du,dv) : du,dv >= 0, 1 <= du+dv <= n_nbd, pos + offset inside the box},
// ordered by l1 distance then dv.
std::vector<Offset> causal_neighborhood(int width, int height, Freq pos, int n_nbd);

struct NeighborhoodPartition {
  Freq position;
  int n_nbd = 0;
  double th_c = 0.0;
  std::vector<Offset> nc;  // correlated: |corr| >= th_c
  std::vector<Offset> no;  // the rest of the causal neighbourhood
};

NeighborhoodPartition split_neighborhood(const PartitionedDictionary& dict, Freq pos, int n_nbd,
                                         double th_c);

// One partition per grid position, indexed like the coefficient grid.
std::vector<NeighborhoodPartition> split_all(const PartitionedDictionary& dict, int n_nbd,
                                             double th_c);

}  // namespace nrec
