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

#include "nrec/sparse.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nrec {

int default_k_max(const PartitionedDictionary& dict) {
  return std::max(1, dict.support_size() / 4);
}

SparseCode omp(const PartitionedDictionary& dict, std::span<const double> signal,
               const OmpParams& params) {
  if (static_cast<int>(signal.size()) != dict.support_size())
    throw std::invalid_argument("signal length does not match the support");
  if (params.eps_res < 0.0) throw std::invalid_argument("eps_res must be non-negative");
  const int n = dict.atom_count();
  const int k_max = params.k_max == 0 ? default_k_max(dict) : params.k_max;
  if (k_max < 1 || k_max > n) throw std::invalid_argument("k_max out of range");

  const Eigen::Map<const Eigen::VectorXd> x(signal.data(), static_cast<Eigen::Index>(signal.size()));
  const double x_norm = x.norm();
  SparseCode code;
  code.residual_history.push_back(x_norm);
  code.residual_norm = x_norm;
  if (x_norm == 0.0) return code;

  const Eigen::MatrixXd& g = dict.gram();
  const Eigen::VectorXd alpha0 = dict.atoms().transpose() * x;
  Eigen::VectorXd alpha = alpha0;
  std::vector<char> usable(n);
  for (int k = 0; k < n; ++k) usable[k] = dict.degenerate(k) ? 0 : 1;

  const double target = params.eps_res * x_norm;
  const double min_pivot = 1.0 / params.max_condition;
  Eigen::MatrixXd l(k_max, k_max);
  l.setZero();
  Eigen::VectorXd gamma;
  double r2 = x_norm * x_norm;

  while (static_cast<int>(code.selected.size()) < k_max && code.residual_norm > target) {
    int best = -1;
    double best_val = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!usable[k]) continue;
      const double v = std::abs(alpha[k]);
      if (v > best_val) {
        best_val = v;
        best = k;
      }
    }
    if (best < 0 || best_val <= 1e-14 * x_norm) break;

    const int m = static_cast<int>(code.selected.size());
    if (m > 0) {
      Eigen::VectorXd gsel(m);
      for (int i = 0; i < m; ++i) gsel[i] = g(code.selected[i], best);
      const Eigen::VectorXd w =
          l.topLeftCorner(m, m).triangularView<Eigen::Lower>().solve(gsel);
      const double d2 = 1.0 - w.squaredNorm();
      if (d2 < min_pivot) {
        code.ill_conditioned = true;
        break;
      }
      l.block(m, 0, 1, m) = w.transpose();
      l(m, m) = std::sqrt(d2);
    } else {
      l(0, 0) = 1.0;
    }
    code.selected.push_back(best);
    usable[best] = 0;

    const int k = m + 1;
    Eigen::VectorXd b(k);
    for (int i = 0; i < k; ++i) b[i] = alpha0[code.selected[i]];
    const auto lk = l.topLeftCorner(k, k);
    const Eigen::VectorXd y = lk.triangularView<Eigen::Lower>().solve(b);
    gamma = lk.transpose().triangularView<Eigen::Upper>().solve(y);

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) beta += gamma[i] * g.col(code.selected[i]);
    alpha = alpha0 - beta;
    // ||r||^2 = ||x||^2 - b'gamma once r is orthogonal to the selection.
    const double next = std::max(0.0, x_norm * x_norm - b.dot(gamma));
    const double prev_norm = code.residual_norm;
    r2 = std::min(next, r2);
    code.residual_norm = std::sqrt(r2);
    assert(code.residual_norm <= prev_norm * (1.0 + 1e-12) + 1e-12);
    (void)prev_norm;
    code.residual_history.push_back(code.residual_norm);
  }

  code.coefficients.assign(gamma.data(), gamma.data() + gamma.size());
  if (!code.selected.empty()) {
    Eigen::VectorXd r = x;
    for (std::size_t i = 0; i < code.selected.size(); ++i)
      r -= code.coefficients[i] * dict.atoms().col(code.selected[i]);
    code.residual_norm = r.norm();
  }
  return code;
}

NrSignal approximation(const PartitionedDictionary& dict, const SparseCode& code) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dict.support_size());
  for (std::size_t i = 0; i < code.selected.size(); ++i)
    y += code.coefficients[i] * dict.atoms().col(code.selected[i]);
  return {std::vector<double>(y.data(), y.data() + y.size())};
}

std::vector<double> scaled_coefficients(const SparseCode& code, const PartitionedDictionary& dict) {
  std::vector<double> t(dict.atom_count(), 0.0);
  for (std::size_t i = 0; i < code.selected.size(); ++i) {
    const int k = code.selected[i];
    if (dict.degenerate(k)) throw std::invalid_argument("sparse code selects a degenerate atom");
    t[k] = code.coefficients[i] / dict.restriction_norm(k);
  }
  return t;
}

std::int32_t quantize(double value, double step) {
  return static_cast<std::int32_t>(std::round(value / step));
}

CoefficientBlock to_coefficient_block(const SparseCode& code, const PartitionedDictionary& dict,
                                      const QuantParams& q) {
  if (!(q.step > 0.0)) throw std::invalid_argument("quantizer step must be positive");
  const std::vector<double> t = scaled_coefficients(code, dict);
  CoefficientBlock block(dict.width(), dict.height());
  for (int k = 0; k < dict.atom_count(); ++k) block.levels[k] = quantize(t[k], q.step);
  return block;
}

NrSignal inverse_restricted(std::span<const double> coefficients, const PartitionedDictionary& dict) {
  if (static_cast<int>(coefficients.size()) != dict.atom_count())
    throw std::invalid_argument("coefficient grid does not match the box");
  const int w = dict.width();
  const int h = dict.height();
  // Row-major h x w grid: T(v,u).
  Eigen::MatrixXd t(h, w);
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) t(v, u) = coefficients[v * w + u];
  const Eigen::MatrixXd img = dict.dct_y().transpose() * t * dict.dct_x();
  NrSignal out;
  out.samples.reserve(dict.support_size());
  for (int idx : dict.support()) out.samples.push_back(img(idx / w, idx % w));
  return out;
}

NrSignal reconstruct(const CoefficientBlock& block, const QuantParams& q,
                     const PartitionedDictionary& dict) {
  if (block.width != dict.width() || block.height != dict.height())
    throw std::invalid_argument("block dimensions do not match the shape box");
  std::vector<double> t(block.levels.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = block.levels[i] * q.step;
  return inverse_restricted(t, dict);
}

Distortion distortion(const NrSignal& a, const NrSignal& b, double peak) {
  if (a.samples.size() != b.samples.size()) throw std::invalid_argument("signal lengths differ");
  Distortion d;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double e = a.samples[i] - b.samples[i];
    d.sse += e * e;
  }
  d.psnr = d.sse == 0.0 ? std::numeric_limits<double>::infinity()
                        : 10.0 * std::log10(peak * peak * static_cast<double>(a.samples.size()) / d.sse);
  return d;
}

}  // namespace nrec
