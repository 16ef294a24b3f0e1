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

// Block coding: per block an optional all-zero flag, then every position in
// reverse zig-zag order as BR (scheme context), LR (neighbour context), HR
// (Exp-Golomb bypass) and sign (bypass).

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nrec/coefficients.hpp"
#include "nrec/probability.hpp"
#include "nrec/range_coder.hpp"
#include "nrec/scan.hpp"
#include "nrec/scheme.hpp"

namespace nrec {

struct CodecOptions {
  bool adaptive = true;   // adapt BR tables; LR and flag tables always adapt
  bool zero_flag = true;  // per-block all-zero flag
};

class CodecModels {
 public:
  // Uniform adaptive BR tables.
  CodecModels(const Scheme& scheme, const CodecOptions& options);
  // BR tables quantized from a trained model.
  CodecModels(const Scheme& scheme, const ProbabilityModel& model, const CodecOptions& options);

  const CodecOptions& options() const { return options_; }
  Cdf15& br(ContextRef ref) { return br_[ref.model][ref.ctx]; }
  Cdf15& lr(int ctx) { return lr_[ctx]; }
  Cdf15& zero_flag() { return zero_flag_; }

  std::uint64_t checksum() const;

 private:
  CodecOptions options_;
  std::vector<std::vector<Cdf15>> br_;
  std::vector<Cdf15> lr_;
  Cdf15 zero_flag_;
};

// Ideal code lengths, -log2 of the coded symbol probability.
struct BitAccounting {
  double flag = 0.0;
  double br = 0.0;
  double lr = 0.0;
  double hr = 0.0;
  double sign = 0.0;
  std::uint64_t br_symbols = 0;

  double total() const { return flag + br + lr + hr + sign; }
  BitAccounting& operator+=(const BitAccounting& o);
};

class BlockCodec {
 public:
  explicit BlockCodec(const Scheme& scheme);

  // Throws std::out_of_range for levels beyond the HR range.
  void encode(RangeEncoder& enc, CodecModels& models, const CoefficientBlock& block,
              BitAccounting* bits = nullptr) const;
  // Throws DecodeError on a corrupt stream.
  CoefficientBlock decode(RangeDecoder& dec, CodecModels& models) const;

  const Scheme& scheme() const { return scheme_; }

 private:
  const Scheme& scheme_;
  ScanOrder scan_;
};

struct StreamResult {
  std::vector<std::uint8_t> payload;
  BitAccounting bits;
};

StreamResult encode_stream(const Scheme& scheme, CodecModels models,
                           std::span<const CoefficientBlock> blocks);
std::vector<CoefficientBlock> decode_stream(const Scheme& scheme, CodecModels models,
                                            std::span<const std::uint8_t> payload,
                                            std::size_t block_count);

// BR symbols only, under fixed tables from the model.
std::vector<std::uint8_t> encode_br_static(const Scheme& scheme, const ProbabilityModel& model,
                                           std::span<const CoefficientBlock> blocks);

}  // namespace nrec
