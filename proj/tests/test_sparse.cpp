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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "nrec/corpus.hpp"
#include "nrec/dictionary.hpp"
#include "nrec/geometry.hpp"
#include "nrec/sparse.hpp"

namespace nrec {
namespace {

Mask exemplar_type2() { return bounding_box(wedge_mask({{8, 16}, 2, 1})).mask; }

std::vector<double> combine(const PartitionedDictionary& d, const std::vector<int>& atoms,
                            const std::vector<double>& coef) {
  std::vector<double> x(d.support_size(), 0.0);
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (int r = 0; r < d.support_size(); ++r) x[r] += coef[i] * d.atoms()(r, atoms[i]);
  return x;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

// Greedy pick of k mutually orthogonal atoms (|G| < 1e-10) starting at a random one.
std::vector<int> orthogonal_atoms(const PartitionedDictionary& d, int k, std::mt19937_64& rng) {
  const Eigen::MatrixXd& g = d.gram();
  std::vector<int> order(d.atom_count());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> out;
  for (int a : order) {
    if (d.degenerate(a)) continue;
    bool ok = true;
    for (int b : out) ok = ok && std::abs(g(a, b)) < 1e-10;
    if (ok) out.push_back(a);
    if (static_cast<int>(out.size()) == k) break;
  }
  return out;
}

TEST_CASE("single atom signal") {
  const PartitionedDictionary d(exemplar_type2());
  const int a = d.index({2, 3});
  const auto x = combine(d, {a}, {5.0});
  const SparseCode c = omp(d, x);
  REQUIRE(c.selected.size() == 1);
  CHECK(c.selected[0] == a);
  CHECK(c.coefficients[0] == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(c.residual_norm < 1e-9);
}

TEST_CASE("zero signal") {
  const PartitionedDictionary d(exemplar_type2());
  const SparseCode c = omp(d, std::vector<double>(d.support_size(), 0.0));
  CHECK(c.selected.empty());
  CHECK(c.residual_norm == 0.0);
}

TEST_CASE("exact recovery of orthogonal combinations") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amp(1.0, 10.0);
  for (const Mask& m : {Mask(8, 8, true), Mask(16, 8, true)}) {
    const PartitionedDictionary d(m);
    for (int trial = 0; trial < 50; ++trial) {
      const int k = 1 + trial % 5;
      const auto atoms = orthogonal_atoms(d, k, rng);
      REQUIRE(static_cast<int>(atoms.size()) == k);
      std::vector<double> coef;
      for (int i = 0; i < k; ++i) coef.push_back(amp(rng) * (rng() % 2 ? 1 : -1));
      const auto x = combine(d, atoms, coef);
      const SparseCode c = omp(d, x, {0.0, k, 1e8});
      CHECK(c.residual_norm < 1e-6 * norm(x));
      CHECK(std::is_permutation(c.selected.begin(), c.selected.end(), atoms.begin()));
    }
  }
  SUBCASE("three orthogonal atoms of an NR dictionary") {
    const PartitionedDictionary d(exemplar_type2());
    std::mt19937_64 r2(3);
    const auto atoms = orthogonal_atoms(d, 3, r2);
    REQUIRE(atoms.size() == 3);
    const auto x = combine(d, atoms, {4.0, -2.0, 7.5});
    const SparseCode c = omp(d, x, {1e-9, 3, 1e8});
    CHECK(c.residual_norm < 1e-6 * norm(x));
  }
}

TEST_CASE("residual is monotone and orthogonal to the selection") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 10.0);
  for (const CanonicalShape& s : default_inventory().shapes) {
    if (s.mask.box_area() > 256) continue;
    const PartitionedDictionary d(s.mask);
    std::vector<double> x(d.support_size());
    for (double& e : x) e = n(rng);
    const SparseCode full = omp(d, x, {1e-6, 12, 1e8});
    for (std::size_t i = 1; i < full.residual_history.size(); ++i)
      CHECK(full.residual_history[i] <= full.residual_history[i - 1] * (1 + 1e-12));
    // Explicit residual of every prefix of the pursuit.
    double prev = norm(x);
    for (int k = 1; k <= static_cast<int>(full.selected.size()); ++k) {
      const SparseCode c = omp(d, x, {1e-6, k, 1e8});
      auto r = x;
      const auto y = approximation(d, c).samples;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
      CHECK(norm(r) == doctest::Approx(c.residual_norm).epsilon(1e-9));
      CHECK(norm(r) <= prev * (1 + 1e-12));
      prev = norm(r);
      for (int a : c.selected) {
        double dot = 0;
        for (std::size_t i = 0; i < r.size(); ++i) dot += r[i] * d.atoms()(static_cast<int>(i), a);
        CHECK(std::abs(dot) < 1e-8 * norm(x));
      }
    }
    std::set<int> distinct(full.selected.begin(), full.selected.end());
    CHECK(distinct.size() == full.selected.size());
  }
}

TEST_CASE("stopping rules") {
  const PartitionedDictionary d(exemplar_type2());
  std::vector<double> x(d.support_size());
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (double& e : x) e = n(rng);
  const SparseCode c = omp(d, x);
  CHECK(static_cast<int>(c.selected.size()) <= default_k_max(d));
  CHECK(default_k_max(d) == d.support_size() / 4);
  const SparseCode loose = omp(d, x, {0.5, 0, 1e8});
  CHECK(loose.residual_norm <= 0.5 * norm(x) + 1e-12);
  CHECK(loose.selected.size() < c.selected.size());
  CHECK_THROWS_AS(omp(d, x, {-1.0, 0, 1e8}), std::invalid_argument);
  CHECK_THROWS_AS(omp(d, x, {1e-3, d.atom_count() + 1, 1e8}), std::invalid_argument);
  CHECK_THROWS_AS(omp(d, std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("degenerate atoms are never selected") {
  Mask m(3, 1);
  m.set(1, 0, true);
  const PartitionedDictionary d(m);
  const SparseCode c = omp(d, std::vector<double>{7.0}, {0.0, 3, 1e8});
  for (int a : c.selected) CHECK_FALSE(d.degenerate(a));
  CHECK(c.residual_norm < 1e-9);
  SparseCode bad;
  bad.selected = {1};
  bad.coefficients = {1.0};
  CHECK_THROWS_AS(to_coefficient_block(bad, d, {1.0}), std::invalid_argument);
}

TEST_CASE("coefficient block from a sparse code") {
  const PartitionedDictionary d(exemplar_type2());
  CHECK(to_coefficient_block(SparseCode{}, d, {2.0}).all_zero());
  const int a = d.index({1, 2});
  SparseCode c;
  c.selected = {a};
  c.coefficients = {d.restriction_norm(a) * 3.0 * 7};
  const CoefficientBlock b = to_coefficient_block(c, d, {3.0});
  for (int k = 0; k < d.atom_count(); ++k) CHECK(b.levels[k] == (k == a ? 7 : 0));
  CHECK_THROWS_AS(to_coefficient_block(c, d, {0.0}), std::invalid_argument);
}

TEST_CASE("quantizer rounds half away from zero") {
  CHECK(quantize(2.5, 1.0) == 3);
  CHECK(quantize(-2.5, 1.0) == -3);
  CHECK(quantize(0.49, 1.0) == 0);
  CHECK(quantize(-7.0, 2.0) == -4);
}

TEST_CASE("reconstruction") {
  SUBCASE("zero block") {
    const PartitionedDictionary d(exemplar_type2());
    for (double v : reconstruct(CoefficientBlock(8, 16), {1.0}, d).samples) CHECK(v == 0.0);
  }
  SUBCASE("DC only on a rectangle") {
    const PartitionedDictionary d(Mask(8, 16, true));
    CoefficientBlock b(8, 16);
    b.at(0, 0) = 5;
    for (double v : reconstruct(b, {2.0}, d).samples)
      CHECK(v == doctest::Approx(5 * 2.0 / std::sqrt(128.0)));
  }
  SUBCASE("dimension mismatch") {
    const PartitionedDictionary d(exemplar_type2());
    CHECK_THROWS_AS(reconstruct(CoefficientBlock(8, 8), {1.0}, d), std::invalid_argument);
  }
}

SparseCode random_code(const PartitionedDictionary& d, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-20.0, 20.0);
  SparseCode c;
  std::vector<int> order(d.atom_count());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int a : order) {
    if (d.degenerate(a)) continue;
    c.selected.push_back(a);
    c.coefficients.push_back(amp(rng));
    if (static_cast<int>(c.selected.size()) == k) break;
  }
  return c;
}

TEST_CASE("scaling identity holds for every shape type") {
  std::mt19937_64 rng(21);
  for (const CanonicalShape& s : default_inventory().shapes) {
    const PartitionedDictionary d(s.mask);
    for (int trial = 0; trial < 20; ++trial) {
      const SparseCode c = random_code(d, 1 + trial % 6, rng);
      const auto via_dct = inverse_restricted(scaled_coefficients(c, d), d).samples;
      const auto direct = approximation(d, c).samples;
      for (std::size_t i = 0; i < direct.size(); ++i)
        CHECK(via_dct[i] == doctest::Approx(direct[i]).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("quantized reconstruction error bound") {
  const PartitionedDictionary d(exemplar_type2());
  std::mt19937_64 rng(9);
  for (double step : {1e-6, 0.5, 4.0}) {
    for (int trial = 0; trial < 30; ++trial) {
      const SparseCode c = random_code(d, 3, rng);
      const auto approx = approximation(d, c).samples;
      const auto rec = reconstruct(to_coefficient_block(c, d, {step}), {step}, d).samples;
      double bound = 0.0;
      for (int a : c.selected) bound += d.atoms().col(a).cwiseAbs().maxCoeff() / d.restriction_norm(a);
      bound *= step / 2;
      double worst = 0.0;
      for (std::size_t i = 0; i < rec.size(); ++i) worst = std::max(worst, std::abs(rec[i] - approx[i]));
      CHECK(worst <= bound + 1e-12);
      if (step == 1e-6) CHECK(worst < 1e-4);
    }
  }
}

TEST_CASE("distortion") {
  NrSignal a{std::vector<double>(64)};
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 5.0);
  for (double& v : a.samples) v = n(rng);
  CHECK(distortion(a, a).sse == 0.0);
  CHECK(distortion(a, a).psnr == std::numeric_limits<double>::infinity());
  NrSignal b = a;
  for (double& v : b.samples) v += 1.0;
  CHECK(distortion(a, b).sse == doctest::Approx(64.0));
  CHECK(distortion(a, b).psnr == doctest::Approx(10 * std::log10(255.0 * 255.0)));
  for (double& v : b.samples) v = n(rng);
  double sse = 0;
  for (std::size_t i = 0; i < 64; ++i) sse += (a.samples[i] - b.samples[i]) * (a.samples[i] - b.samples[i]);
  CHECK(distortion(a, b).sse == doctest::Approx(sse).epsilon(1e-12));
  CHECK_THROWS_AS(distortion(a, NrSignal{{1.0}}), std::invalid_argument);
}

TEST_CASE("coefficient energy concentrates in the top-left quadrant") {
  for (const CanonicalShape& s : default_inventory().shapes) {
    if (s.mask.box_area() > 256) continue;
    const PartitionedDictionary d(s.mask);
    const auto blocks = gen_synthetic({0.9, 20.0, 1}, s.mask, 200);
    double top_left = 0, total = 0;
    for (const ResidualBlock& b : blocks) {
      const auto x = support_samples(b, s.mask);
      const auto t = scaled_coefficients(omp(d, x), d);
      for (int k = 0; k < d.atom_count(); ++k) {
        const Freq f = d.freq(k);
        const double e = t[k] * t[k];
        total += e;
        if (2 * f.u < d.width() && 2 * f.v < d.height()) top_left += e;
      }
    }
    INFO("shape " << s.id);
    CHECK(top_left >= 0.7 * total);
  }
}

}  // namespace
}  // namespace nrec
