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

// Sparse NR transform: OMP over a partitioned dictionary, the scaling rule
// that turns the sparse code into rectangular DCT levels, and the decoder
// side inverse DCT restricted to the support.

#pragma once

#include <span>
#include <vector>

#include "nrec/coefficients.hpp"
#include "nrec/dictionary.hpp"

namespace nrec {

// Samples over the support, in PartitionedDictionary::support() order.
struct NrSignal {
  std::vector<double> samples;
};

struct SparseCode {
  std::vector<int> selected;  // atom indices, selection order
  std::vector<double> coefficients;
  double residual_norm = 0.0;
  // Residual norm after each pursuit step, starting with ||signal||.
  std::vector<double> residual_history;
  bool ill_conditioned = false;
};

struct OmpParams {
  double eps_res = 1e-3;
  int k_max = 0;  // 0 selects support area / 4
  double max_condition = 1e8;
};

int default_k_max(const PartitionedDictionary& dict);

// Batch OMP on the dictionary Gram with a progressive Cholesky update.
// Throws std::invalid_argument on a size mismatch or bad parameters.
SparseCode omp(const PartitionedDictionary& dict, std::span<const double> signal,
               const OmpParams& params = {});

// Sum of c_k * atom_k over the support.
NrSignal approximation(const PartitionedDictionary& dict, const SparseCode& code);

struct QuantParams {
  double step = 1.0;
};

// Unquantized DCT coefficients t(u,v) = c / s(u,v) on the box grid.
std::vector<double> scaled_coefficients(const SparseCode& code, const PartitionedDictionary& dict);

// Round half away from zero.
std::int32_t quantize(double value, double step);

CoefficientBlock to_coefficient_block(const SparseCode& code, const PartitionedDictionary& dict,
                                      const QuantParams& q);

// Inverse 2D DCT-II of a real coefficient grid, restricted to the support.
NrSignal inverse_restricted(std::span<const double> coefficients, const PartitionedDictionary& dict);

NrSignal reconstruct(const CoefficientBlock& block, const QuantParams& q,
                     const PartitionedDictionary& dict);

struct Distortion {
  double sse = 0.0;
  double psnr = 0.0;  // +inf when sse == 0
};

Distortion distortion(const NrSignal& a, const NrSignal& b, double peak = 255.0);

}  // namespace nrec
