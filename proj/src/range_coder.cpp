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

#include "nrec/range_coder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace nrec {

namespace {

constexpr std::uint32_t kTop = 1u << 24;

}  // namespace

Cdf15::Cdf15(int alphabet) : size_(alphabet) {
  if (alphabet < 2 || alphabet > kMaxAlphabet) throw std::invalid_argument("alphabet size out of range");
  for (int i = 0; i <= alphabet; ++i)
    cum_[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(kProbTotal) * i) / alphabet);
}

Cdf15 Cdf15::from_probabilities(std::span<const double> probs) {
  const int m = static_cast<int>(probs.size());
  Cdf15 cdf(m);
  const std::uint32_t spare = kProbTotal - static_cast<std::uint32_t>(m);
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("probabilities sum to zero");
  std::array<std::uint32_t, kMaxAlphabet> f{};
  std::array<double, kMaxAlphabet> rem{};
  std::uint32_t used = 0;
  for (int i = 0; i < m; ++i) {
    const double exact = probs[i] / sum * spare;
    f[i] = static_cast<std::uint32_t>(std::floor(exact));
    rem[i] = exact - f[i];
    used += f[i];
  }
  std::array<int, kMaxAlphabet> order{};
  std::iota(order.begin(), order.begin() + m, 0);
  std::stable_sort(order.begin(), order.begin() + m, [&](int a, int b) { return rem[a] > rem[b]; });
  for (int k = 0; used < spare; k = (k + 1) % m, ++used) ++f[order[k]];
  cdf.cum_[0] = 0;
  for (int i = 0; i < m; ++i) cdf.cum_[i + 1] = cdf.cum_[i] + f[i] + 1;
  return cdf;
}

int Cdf15::find(std::uint32_t value) const {
  int s = 0;
  while (s + 1 < size_ && cum_[s + 1] <= value) ++s;
  return s;
}

void Cdf15::adapt(int symbol) {
  const int rate = 3 + (count_ > 15) + (count_ > 31) + std::min(static_cast<int>(std::bit_width(static_cast<unsigned>(size_))) - 1, 2);
  for (int i = 1; i < size_; ++i) {
    if (i <= symbol) {
      cum_[i] -= cum_[i] >> rate;
    } else {
      cum_[i] += (kProbTotal - cum_[i]) >> rate;
    }
  }
  // Keep every symbol at least one unit wide.
  for (int i = 1; i < size_; ++i) cum_[i] = std::max(cum_[i], cum_[i - 1] + 1);
  for (int i = size_ - 1; i >= 1; --i) cum_[i] = std::min(cum_[i], cum_[i + 1] - 1);
  if (count_ < 32) ++count_;
}

std::uint64_t Cdf15::hash(std::uint64_t seed) const {
  std::uint64_t h = seed ^ 0x9E3779B97F4A7C15ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(size_));
  mix(static_cast<std::uint64_t>(count_));
  for (int i = 0; i <= size_; ++i) mix(cum_[i]);
  return h;
}

bool Cdf15::valid() const {
  if (size_ < 2 || cum_[0] != 0 || cum_[size_] != kProbTotal) return false;
  for (int i = 0; i < size_; ++i)
    if (cum_[i + 1] <= cum_[i]) return false;
  return true;
}

void RangeEncoder::encode(std::uint32_t low, std::uint32_t freq) {
  range_ >>= kProbBits;
  low_ += static_cast<std::uint64_t>(low) * range_;
  range_ *= freq;
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
}

void RangeEncoder::encode_bits(std::uint32_t value, int count) {
  for (int i = count - 1; i >= 0; --i) encode_bit((value >> i) & 1u);
}

void RangeEncoder::encode_golomb(std::uint32_t value) {
  const std::uint64_t v = static_cast<std::uint64_t>(value) + 1;
  const int len = std::bit_width(v);
  for (int i = 1; i < len; ++i) encode_bit(0);
  for (int i = len - 1; i >= 0; --i) encode_bit(static_cast<int>((v >> i) & 1u));
}

void RangeEncoder::shift_low() {
  if (low_ < 0xFF000000ull || low_ >= (1ull << 32)) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t temp = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(temp + carry));
      temp = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFull) << 8;
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  std::vector<std::uint8_t> out = std::move(out_);
  // The first byte is always the initial zero cache.
  out.erase(out.begin());
  *this = RangeEncoder();
  return out;
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> data) : data_(data) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next();
}

std::uint8_t RangeDecoder::next() {
  const std::uint8_t b = pos_ < data_.size() ? data_[pos_] : 0;
  ++pos_;
  return b;
}

std::uint32_t RangeDecoder::target() {
  range_ >>= kProbBits;
  const std::uint32_t v = code_ / range_;
  if (v >= kProbTotal) throw DecodeError("corrupt range-coded stream");
  return v;
}

void RangeDecoder::consume(std::uint32_t low, std::uint32_t freq) {
  code_ -= low * range_;
  range_ *= freq;
  while (range_ < kTop) {
    code_ = (code_ << 8) | next();
    range_ <<= 8;
  }
  if (overrun()) throw DecodeError("range-coded stream is truncated");
}

int RangeDecoder::decode_symbol(const Cdf15& cdf) {
  const int s = cdf.find(target());
  consume(cdf.low(s), cdf.freq(s));
  return s;
}

int RangeDecoder::decode_bit() {
  const int bit = target() >= kProbTotal / 2 ? 1 : 0;
  consume(bit ? kProbTotal / 2 : 0, kProbTotal / 2);
  return bit;
}

std::uint32_t RangeDecoder::decode_bits(int count) {
  std::uint32_t v = 0;
  for (int i = 0; i < count; ++i) v = (v << 1) | static_cast<std::uint32_t>(decode_bit());
  return v;
}

std::uint32_t RangeDecoder::decode_golomb() {
  int zeros = 0;
  while (decode_bit() == 0) {
    if (++zeros > 32) throw DecodeError("Exp-Golomb prefix too long");
  }
  std::uint64_t v = 1;
  for (int i = 0; i < zeros; ++i) v = (v << 1) | static_cast<std::uint64_t>(decode_bit());
  return static_cast<std::uint32_t>(v - 1);
}

}  // namespace nrec
