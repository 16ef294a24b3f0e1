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

// Multi-symbol range coder with 15-bit cumulative frequencies.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace nrec {

inline constexpr int kProbBits = 15;
inline constexpr std::uint32_t kProbTotal = 1u << kProbBits;
inline constexpr int kMaxAlphabet = 16;

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cumulative frequencies c[0] = 0 < c[1] < ... < c[M] = 2^15.
class Cdf15 {
 public:
  Cdf15() = default;
  // Uniform start.
  explicit Cdf15(int alphabet);
  // Largest-remainder rounding to 2^15 with every symbol >= 1.
  static Cdf15 from_probabilities(std::span<const double> probs);

  int size() const { return size_; }
  std::uint32_t low(int s) const { return cum_[s]; }
  std::uint32_t freq(int s) const { return cum_[s + 1] - cum_[s]; }
  double probability(int s) const { return static_cast<double>(freq(s)) / kProbTotal; }
  // Symbol whose interval holds `value` in [0, 2^15).
  int find(std::uint32_t value) const;

  // rate = 3 + (count > 15) + (count > 31) + min(floor(log2 M), 2).
  void adapt(int symbol);
  int count() const { return count_; }

  std::uint64_t hash(std::uint64_t seed) const;
  bool valid() const;

 private:
  int size_ = 0;
  int count_ = 0;
  std::array<std::uint32_t, kMaxAlphabet + 1> cum_{};
};

class RangeEncoder {
 public:
  void encode(std::uint32_t low, std::uint32_t freq);
  void encode_symbol(const Cdf15& cdf, int symbol) { encode(cdf.low(symbol), cdf.freq(symbol)); }
  void encode_bit(int bit) { encode(bit ? kProbTotal / 2 : 0, kProbTotal / 2); }
  void encode_bits(std::uint32_t value, int count);
  // Order-0 Exp-Golomb with bypass bits.
  void encode_golomb(std::uint32_t value);

  std::vector<std::uint8_t> finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> data);

  int decode_symbol(const Cdf15& cdf);
  int decode_bit();
  std::uint32_t decode_bits(int count);
  std::uint32_t decode_golomb();

  // Bytes read past the end of the stream, beyond the encoder's flush.
  bool overrun() const { return pos_ > data_.size() + 4; }

 private:
  std::uint32_t target();
  void consume(std::uint32_t low, std::uint32_t freq);
  std::uint8_t next();

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
};

}  // namespace nrec
