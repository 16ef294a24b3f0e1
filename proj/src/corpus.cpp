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

#include "nrec/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

namespace nrec {

namespace {

// Uniform in (0, 1] from the top 53 bits.
double uniform(std::mt19937_64& g) { return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53; }

// Box-Muller keeps the stream identical across standard libraries.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : g_(seed) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform(g_)));
    const double a = 2.0 * std::numbers::pi * uniform(g_);
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 g_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::int16_t to_sample(double v) {
  const double r = std::round(v);
  return static_cast<std::int16_t>(std::clamp(r, -32768.0, 32767.0));
}

}  // namespace

std::vector<double> support_samples(const ResidualBlock& block, const Mask& support) {
  if (block.width != support.width() || block.height != support.height())
    throw DataError("residual block does not match the shape box");
  std::vector<double> out;
  for (int idx : support.support()) out.push_back(block.samples[idx]);
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ index);
}

std::vector<double> ar1_field(int width, int height, double rho, double sigma, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in [0,1)");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  Gaussian noise(seed);
  const double innov = std::sqrt(1.0 - rho * rho);
  std::vector<double> f(static_cast<std::size_t>(width) * height);
  for (double& v : f) v = noise();
  for (int y = 0; y < height; ++y) {
    double* row = &f[static_cast<std::size_t>(y) * width];
    for (int x = 1; x < width; ++x) row[x] = rho * row[x - 1] + innov * row[x];
  }
  for (int x = 0; x < width; ++x) {
    for (int y = 1; y < height; ++y) {
      const std::size_t i = static_cast<std::size_t>(y) * width + x;
      f[i] = rho * f[i - width] + innov * f[i];
    }
  }
  for (double& v : f) v *= sigma;
  return f;
}

std::vector<ResidualBlock> gen_synthetic(const SyntheticSpec& spec, const Mask& shape, int count,
                                         int threads) {
  if (count < 0) throw std::invalid_argument("negative block count");
  const int w = shape.width();
  const int h = shape.height();
  std::vector<ResidualBlock> out(count);
  auto work = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const std::vector<double> f = ar1_field(w, h, spec.rho, spec.sigma, block_seed(spec.seed, i));
      ResidualBlock& b = out[i];
      b.width = w;
      b.height = h;
      b.samples.assign(f.size(), 0);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (shape.at(x, y)) b.samples[y * w + x] = to_sample(f[y * w + x]);
    }
  };
  threads = std::max(1, threads);
  if (threads == 1 || count < 2 * threads) {
    work(0, count);
    return out;
  }
  std::vector<std::thread> pool;
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(count, begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  for (std::thread& th : pool) th.join();
  return out;
}

FrameResiduals gen_from_frames(const GrayImage& current, const GrayImage& reference,
                               const Mask& shape, int radius, int max_blocks) {
  if (current.width != reference.width || current.height != reference.height)
    throw DataError("frames differ in size");
  const int w = shape.width();
  const int h = shape.height();
  if (current.width < w || current.height < h) throw DataError("frames are smaller than the block");
  if (radius < 0) throw std::invalid_argument("negative search radius");
  const std::vector<int> support = shape.support();
  FrameResiduals out;
  for (int by = 0; by + h <= current.height; by += h) {
    for (int bx = 0; bx + w <= current.width; bx += w) {
      if (max_blocks > 0 && static_cast<int>(out.blocks.size()) >= max_blocks) return out;
      long best_sad = std::numeric_limits<long>::max();
      MotionVector best{};
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          if (bx + dx < 0 || by + dy < 0 || bx + dx + w > current.width || by + dy + h > current.height)
            continue;
          long sad = 0;
          for (int idx : support) {
            const int x = idx % w;
            const int y = idx / w;
            sad += std::abs(current.at(bx + x, by + y) - reference.at(bx + x + dx, by + y + dy));
          }
          const int mag = std::abs(dx) + std::abs(dy);
          const int best_mag = std::abs(best.dx) + std::abs(best.dy);
          if (sad < best_sad || (sad == best_sad && mag < best_mag)) {
            best_sad = sad;
            best = {dx, dy};
          }
        }
      }
      ResidualBlock r{w, h, std::vector<std::int16_t>(static_cast<std::size_t>(w) * h, 0)};
      double src = 0.0, res = 0.0;
      for (int idx : support) {
        const int x = idx % w;
        const int y = idx / w;
        const int c = current.at(bx + x, by + y);
        const int d = c - reference.at(bx + x + best.dx, by + y + best.dy);
        r.samples[idx] = static_cast<std::int16_t>(d);
        src += static_cast<double>(c) * c;
        res += static_cast<double>(d) * d;
      }
      out.blocks.push_back(std::move(r));
      out.motion.push_back(best);
      out.source_energy.push_back(src);
      out.residual_energy.push_back(res);
    }
  }
  return out;
}

DatasetSplit split(std::size_t count, std::uint64_t seed) {
  if (count < 5) throw std::invalid_argument("split needs at least 5 items");
  std::vector<std::size_t> idx(count);
  for (std::size_t i = 0; i < count; ++i) idx[i] = i;
  std::mt19937_64 g(splitmix64(seed));
  for (std::size_t i = count - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(g() % (i + 1));
    std::swap(idx[i], idx[j]);
  }
  const std::size_t n_train = (8 * count + 5) / 10;
  DatasetSplit s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  return s;
}

}  // namespace nrec
