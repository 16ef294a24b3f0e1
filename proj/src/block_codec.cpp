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

#include "nrec/block_codec.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>

#include "nrec/baseline.hpp"

namespace nrec {

namespace {

double cost(const Cdf15& cdf, int s) { return -std::log2(cdf.probability(s)); }

}  // namespace

CodecModels::CodecModels(const Scheme& scheme, const CodecOptions& options)
    : options_(options), lr_(kLrContexts, Cdf15(kLrSymbols)), zero_flag_(2) {
  br_.resize(scheme.model_count());
  for (int m = 0; m < scheme.model_count(); ++m) br_[m].assign(scheme.context_count(m), Cdf15(kBrSymbols));
}

CodecModels::CodecModels(const Scheme& scheme, const ProbabilityModel& model,
                         const CodecOptions& options)
    : CodecModels(scheme, options) {
  if (model.model_count() != scheme.model_count())
    throw std::invalid_argument("probability model does not match the scheme");
  for (int m = 0; m < scheme.model_count(); ++m) {
    if (model.context_count(m) != scheme.context_count(m))
      throw std::invalid_argument("probability model does not match the scheme");
    for (int c = 0; c < scheme.context_count(m); ++c)
      br_[m][c] = Cdf15::from_probabilities(model.probabilities({m, c}));
  }
}

std::uint64_t CodecModels::checksum() const {
  std::uint64_t h = 0;
  for (const auto& t : br_)
    for (const Cdf15& c : t) h = c.hash(h);
  for (const Cdf15& c : lr_) h = c.hash(h);
  return zero_flag_.hash(h);
}

BitAccounting& BitAccounting::operator+=(const BitAccounting& o) {
  flag += o.flag;
  br += o.br;
  lr += o.lr;
  hr += o.hr;
  sign += o.sign;
  br_symbols += o.br_symbols;
  return *this;
}

BlockCodec::BlockCodec(const Scheme& scheme)
    : scheme_(scheme), scan_(zigzag(scheme.width(), scheme.height())) {}

void BlockCodec::encode(RangeEncoder& enc, CodecModels& models, const CoefficientBlock& block,
                        BitAccounting* bits) const {
  if (block.width != scheme_.width() || block.height != scheme_.height())
    throw std::invalid_argument("block does not match the scheme dimensions");
  BitAccounting local;
  if (models.options().zero_flag) {
    const int flag = block.all_zero() ? 1 : 0;
    Cdf15& cdf = models.zero_flag();
    local.flag += cost(cdf, flag);
    enc.encode_symbol(cdf, flag);
    cdf.adapt(flag);
    if (flag) {
      if (bits) *bits += local;
      return;
    }
  }
  for (int i = 0; i < scan_.size(); ++i) {
    const Pos p = scan_.coding(i);
    const SymbolDecomposition s = decompose(block.at(p.x, p.y));
    Cdf15& br = models.br(scheme_.context(block, p));
    local.br += cost(br, s.br);
    ++local.br_symbols;
    enc.encode_symbol(br, s.br);
    if (models.options().adaptive) br.adapt(s.br);
    if (!s.lr.empty()) {
      Cdf15& lr = models.lr(ctx_lr(block, p));
      for (int k : s.lr) {
        local.lr += cost(lr, k);
        enc.encode_symbol(lr, k);
        lr.adapt(k);
      }
      if (static_cast<int>(s.lr.size()) == kMaxLrSteps && s.lr.back() == 3) {
        enc.encode_golomb(static_cast<std::uint32_t>(s.hr));
        local.hr += 2.0 * std::bit_width(static_cast<std::uint32_t>(s.hr) + 1u) - 1.0;
      }
    }
    if (s.br != 0) {
      enc.encode_bit(s.negative ? 1 : 0);
      local.sign += 1.0;
    }
  }
  if (bits) *bits += local;
}

CoefficientBlock BlockCodec::decode(RangeDecoder& dec, CodecModels& models) const {
  CoefficientBlock block(scheme_.width(), scheme_.height());
  if (models.options().zero_flag) {
    Cdf15& cdf = models.zero_flag();
    const int flag = dec.decode_symbol(cdf);
    cdf.adapt(flag);
    if (flag) return block;
  }
  for (int i = 0; i < scan_.size(); ++i) {
    const Pos p = scan_.coding(i);
    SymbolDecomposition s;
    Cdf15& br = models.br(scheme_.context(block, p));
    s.br = dec.decode_symbol(br);
    if (models.options().adaptive) br.adapt(s.br);
    if (s.br == 3) {
      Cdf15& lr = models.lr(ctx_lr(block, p));
      for (int step = 0; step < kMaxLrSteps; ++step) {
        const int k = dec.decode_symbol(lr);
        lr.adapt(k);
        s.lr.push_back(k);
        if (k < 3) break;
      }
      if (static_cast<int>(s.lr.size()) == kMaxLrSteps && s.lr.back() == 3) {
        const std::uint32_t hr = dec.decode_golomb();
        if (hr > static_cast<std::uint32_t>(kMaxAbsLevel - kBrLrLimit))
          throw DecodeError("HR value out of range");
        s.hr = static_cast<int>(hr);
      }
    }
    if (s.br != 0) s.negative = dec.decode_bit() != 0;
    block.at(p.x, p.y) = recompose(s);
  }
  return block;
}

StreamResult encode_stream(const Scheme& scheme, CodecModels models,
                           std::span<const CoefficientBlock> blocks) {
  StreamResult r;
  RangeEncoder enc;
  const BlockCodec codec(scheme);
  for (const CoefficientBlock& b : blocks) codec.encode(enc, models, b, &r.bits);
  r.payload = enc.finish();
  return r;
}

std::vector<CoefficientBlock> decode_stream(const Scheme& scheme, CodecModels models,
                                            std::span<const std::uint8_t> payload,
                                            std::size_t block_count) {
  RangeDecoder dec(payload);
  const BlockCodec codec(scheme);
  std::vector<CoefficientBlock> out;
  out.reserve(block_count);
  for (std::size_t i = 0; i < block_count; ++i) out.push_back(codec.decode(dec, models));
  return out;
}

std::vector<std::uint8_t> encode_br_static(const Scheme& scheme, const ProbabilityModel& model,
                                           std::span<const CoefficientBlock> blocks) {
  CodecModels models(scheme, model, {.adaptive = false, .zero_flag = false});
  const ScanOrder scan = zigzag(scheme.width(), scheme.height());
  RangeEncoder enc;
  for (const CoefficientBlock& b : blocks) {
    for (int i = 0; i < scan.size(); ++i) {
      const Pos p = scan.coding(i);
      enc.encode_symbol(models.br(scheme.context(b, p)), std::min(std::abs(b.at(p.x, p.y)), 3));
    }
  }
  return enc.finish();
}

}  // namespace nrec
