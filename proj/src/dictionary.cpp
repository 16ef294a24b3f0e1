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

#include "nrec/dictionary.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace nrec {

struct PartitionedDictionary::GramCache {
  std::once_flag once;
  Eigen::MatrixXd gram;
};

Eigen::MatrixXd dct_matrix(int size) {
  if (size <= 0) throw std::invalid_argument("dct size must be positive");
  Eigen::MatrixXd c(size, size);
  const double n = size;
  for (int k = 0; k < size; ++k) {
    const double alpha = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int i = 0; i < size; ++i)
      c(k, i) = alpha * std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n));
  }
  return c;
}

PartitionedDictionary::PartitionedDictionary(const Mask& support)
    : support_mask_(support),
      support_(support.support()),
      dct_x_(dct_matrix(support.width())),
      dct_y_(dct_matrix(support.height())),
      gram_(std::make_shared<GramCache>()) {
  if (support_.empty()) throw std::invalid_argument("dictionary support is empty");
  const int w = width();
  const int n = atom_count();
  atoms_.resize(support_size(), n);
  norms_.resize(n);
  for (int k = 0; k < n; ++k) {
    const int u = k % w;
    const int v = k / w;
    for (int i = 0; i < support_size(); ++i) {
      const int x = support_[i] % w;
      const int y = support_[i] / w;
      atoms_(i, k) = dct_x_(u, x) * dct_y_(v, y);
    }
    const double s = atoms_.col(k).norm();
    norms_[k] = s;
    if (s < kDegenerateNorm) {
      atoms_.col(k).setZero();
    } else {
      atoms_.col(k) /= s;
    }
  }
}

double PartitionedDictionary::correlation(int a, int b) const { return std::abs(inner(a, b)); }

const Eigen::MatrixXd& PartitionedDictionary::gram() const {
  std::call_once(gram_->once, [this] { gram_->gram = atoms_.transpose() * atoms_; });
  return gram_->gram;
}

CorrelationMap correlation_map(const PartitionedDictionary& dict, Freq center, int radius) {
  if (!dict.contains(center)) throw std::out_of_range("correlation_map center outside the box");
  CorrelationMap map{center, radius, {}};
  map.values.assign(static_cast<std::size_t>(map.side()) * map.side(),
                    std::numeric_limits<double>::quiet_NaN());
  const int a = dict.index(center);
  for (int dv = -radius; dv <= radius; ++dv) {
    for (int du = -radius; du <= radius; ++du) {
      const Freq f{center.u + du, center.v + dv};
      if (!dict.contains(f)) continue;
      map.values[(dv + radius) * map.side() + (du + radius)] = dict.correlation(a, dict.index(f));
    }
  }
  return map;
}

double checkerboard_ratio(const CorrelationMap& map) {
  double odd = 0.0, even = 0.0;
  int n_odd = 0, n_even = 0;
  for (int dv = -map.radius; dv <= map.radius; ++dv) {
    for (int du = -map.radius; du <= map.radius; ++du) {
      if (du == 0 && dv == 0) continue;
      const double c = map.at(du, dv);
      if (std::isnan(c)) continue;
      if ((std::abs(du) + std::abs(dv)) % 2 == 1) {
        odd += c;
        ++n_odd;
      } else {
        even += c;
        ++n_even;
      }
    }
  }
  if (n_odd == 0 || n_even == 0) return 1.0;
  odd /= n_odd;
  even /= n_even;
  const double hi = std::max(odd, even);
  const double lo = std::min(odd, even);
  if (lo <= 0.0) return hi > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  return hi / lo;
}

std::vector<Offset> causal_neighborhood(int width, int height, Freq pos, int n_nbd) {
  std::vector<Offset> out;
  for (int d = 1; d <= n_nbd; ++d) {
    for (int dv = 0; dv <= d; ++dv) {
      const int du = d - dv;
      if (pos.u + du < width && pos.v + dv < height) out.push_back({du, dv});
    }
  }
  return out;
}

NeighborhoodPartition split_neighborhood(const PartitionedDictionary& dict, Freq pos, int n_nbd,
                                         double th_c) {
  if (n_nbd < 1) throw std::invalid_argument("n_nbd must be >= 1");
  if (!(th_c > 0.0 && th_c <= 1.0)) throw std::invalid_argument("th_c must lie in (0,1]");
  if (!dict.contains(pos)) throw std::out_of_range("position outside the box");
  NeighborhoodPartition p{pos, n_nbd, th_c, {}, {}};
  const int a = dict.index(pos);
  for (const Offset& o : causal_neighborhood(dict.width(), dict.height(), pos, n_nbd)) {
    const double c = dict.correlation(a, dict.index({pos.u + o.du, pos.v + o.dv}));
    // A threshold of 1 selects nothing, even for atoms equal up to round-off.
    if (th_c < 1.0 && c >= th_c) {
      p.nc.push_back(o);
    } else {
      p.no.push_back(o);
    }
  }
  return p;
}

std::vector<NeighborhoodPartition> split_all(const PartitionedDictionary& dict, int n_nbd,
                                             double th_c) {
  std::vector<NeighborhoodPartition> out;
  out.reserve(dict.atom_count());
  for (int k = 0; k < dict.atom_count(); ++k) out.push_back(split_neighborhood(dict, dict.freq(k), n_nbd, th_c));
  return out;
}

}  // namespace nrec
