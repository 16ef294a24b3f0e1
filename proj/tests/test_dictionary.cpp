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
#include <numbers>
#include <stdexcept>

#include "nrec/dictionary.hpp"
#include "nrec/geometry.hpp"

namespace nrec {
namespace {

double basis_1d(int n, int k, int x) {
  const double c = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  return c * std::cos(std::numbers::pi * (2 * x + 1) * k / (2.0 * n));
}

// Restricted, unnormalized DCT atom computed straight from the cosine formula.
std::vector<double> oracle_atom(const Mask& m, int u, int v) {
  std::vector<double> out;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m.at(x, y)) out.push_back(basis_1d(m.width(), u, x) * basis_1d(m.height(), v, y));
  return out;
}

double oracle_corr(const Mask& m, Freq a, Freq b) {
  const auto da = oracle_atom(m, a.u, a.v);
  const auto db = oracle_atom(m, b.u, b.v);
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    ab += da[i] * db[i];
    aa += da[i] * da[i];
    bb += db[i] * db[i];
  }
  return std::abs(ab) / std::sqrt(aa * bb);
}

Mask exemplar_type2() { return bounding_box(wedge_mask({{8, 16}, 2, 1})).mask; }

TEST_CASE("DCT matrix is orthonormal and matches the cosine formula") {
  for (int n : {1, 4, 8, 16, 32}) {
    const Eigen::MatrixXd c = dct_matrix(n);
    CHECK((c * c.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    for (int k = 0; k < n; ++k)
      for (int x = 0; x < n; ++x) CHECK(c(k, x) == doctest::Approx(basis_1d(n, k, x)).epsilon(1e-12));
  }
}

TEST_CASE("rectangular support gives the orthonormal basis") {
  const PartitionedDictionary d(Mask(8, 8, true));
  CHECK(d.atom_count() == 64);
  CHECK(d.support_size() == 64);
  CHECK((d.gram() - Eigen::MatrixXd::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-9);
  const CorrelationMap map = correlation_map(d, {3, 3}, 2);
  for (int dv = -2; dv <= 2; ++dv)
    for (int du = -2; du <= 2; ++du)
      CHECK(map.at(du, dv) == doctest::Approx(du == 0 && dv == 0 ? 1.0 : 0.0));
}

TEST_CASE("every inventory dictionary has box-area atoms, unit Gram diagonal and Parseval norms") {
  for (const CanonicalShape& s : default_inventory().shapes) {
    const PartitionedDictionary d(s.mask);
    CHECK(d.atom_count() == s.mask.box_area());
    CHECK(d.support_size() == s.mask.area());
    CHECK(d.restriction_norms().squaredNorm() == doctest::Approx(s.mask.area()).epsilon(1e-9));
    const Eigen::MatrixXd& g = d.gram();
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < d.atom_count(); ++k) {
      if (d.degenerate(k)) continue;
      CHECK(g(k, k) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(d.correlation(k, k) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("Type-2 exemplar dictionary agrees with the oracle") {
  const Mask m = exemplar_type2();
  const PartitionedDictionary d(m);
  CHECK(d.atom_count() == 128);
  for (Freq a : {Freq{0, 0}, Freq{3, 3}, Freq{5, 11}})
    for (Freq b : {Freq{1, 0}, Freq{4, 3}, Freq{3, 5}, Freq{7, 15}})
      CHECK(d.correlation(d.index(a), d.index(b)) ==
            doctest::Approx(oracle_corr(m, a, b)).epsilon(1e-10));
}

TEST_CASE("checkerboard correlation on the Type-2 exemplar") {
  const Mask m = exemplar_type2();
  const PartitionedDictionary d(m);
  const CorrelationMap map = correlation_map(d, {3, 3}, 2);
  double odd = 0, even = 0;
  int n_odd = 0, n_even = 0;
  for (int dv = -2; dv <= 2; ++dv) {
    for (int du = -2; du <= 2; ++du) {
      if (du == 0 && dv == 0) continue;
      const double c = oracle_corr(m, {3, 3}, {3 + du, 3 + dv});
      CHECK(map.at(du, dv) == doctest::Approx(c).epsilon(1e-10));
      if ((std::abs(du) + std::abs(dv)) % 2) {
        odd += c;
        ++n_odd;
      } else {
        even += c;
        ++n_even;
      }
    }
  }
  const double oracle_ratio = (odd / n_odd) / (even / n_even);
  CHECK(oracle_ratio >= 3.0);
  CHECK(checkerboard_ratio(map) >= 3.0);
}

TEST_CASE("correlation is symmetric in the offset") {
  const PartitionedDictionary d(exemplar_type2());
  for (int v = 0; v < 16; v += 3)
    for (int u = 0; u < 8; u += 2)
      for (int dv = -2; dv <= 2; ++dv)
        for (int du = -2; du <= 2; ++du) {
          const Freq a{u, v}, b{u + du, v + dv};
          if (!d.contains(b)) continue;
          CHECK(correlation_map(d, a, 2).at(du, dv) ==
                doctest::Approx(correlation_map(d, b, 2).at(-du, -dv)));
        }
}

TEST_CASE("correlation map marks out-of-box entries as NaN") {
  const PartitionedDictionary d(exemplar_type2());
  const CorrelationMap map = correlation_map(d, {0, 0}, 2);
  CHECK(std::isnan(map.at(-1, 0)));
  CHECK_FALSE(std::isnan(map.at(1, 1)));
  CHECK_THROWS_AS(correlation_map(d, {8, 0}, 2), std::out_of_range);
}

TEST_CASE("degenerate atoms have zero columns") {
  Mask m(3, 1);
  m.set(1, 0, true);
  const PartitionedDictionary d(m);
  CHECK(d.degenerate(1));
  CHECK_FALSE(d.degenerate(0));
  CHECK(d.atoms().col(1).norm() == 0.0);
}

TEST_CASE("causal neighbourhood") {
  const auto n4 = causal_neighborhood(16, 16, {2, 2}, 4);
  CHECK(n4.size() == 14);
  CHECK(n4.front() == Offset{1, 0});
  CHECK(n4[1] == Offset{0, 1});
  for (const Offset& o : n4) {
    CHECK(o.du >= 0);
    CHECK(o.dv >= 0);
    CHECK(o.du + o.dv <= 4);
  }
  CHECK(causal_neighborhood(8, 8, {7, 7}, 4).empty());
  CHECK(causal_neighborhood(8, 8, {7, 0}, 2).size() == 2);
}

TEST_CASE("neighbourhood split") {
  SUBCASE("rectangular support has no correlated neighbours") {
    const PartitionedDictionary d(Mask(8, 8, true));
    for (const auto& p : split_all(d, 4, 0.2)) CHECK(p.nc.empty());
  }
  SUBCASE("Nc and No partition the causal neighbourhood") {
    for (const CanonicalShape& s : default_inventory().shapes) {
      if (s.mask.box_area() > 512) continue;
      const PartitionedDictionary d(s.mask);
      for (int n_nbd : {1, 2, 4}) {
        for (double th : {0.05, 0.2, 0.6}) {
          for (const auto& p : split_all(d, n_nbd, th)) {
            const auto all = causal_neighborhood(d.width(), d.height(), p.position, n_nbd);
            CHECK(p.nc.size() + p.no.size() == all.size());
            for (const Offset& o : p.nc)
              CHECK(d.correlation(d.index(p.position),
                                  d.index({p.position.u + o.du, p.position.v + o.dv})) >= th);
          }
        }
      }
    }
  }
  SUBCASE("th_c = 1 selects nothing") {
    const PartitionedDictionary d(exemplar_type2());
    for (const auto& p : split_all(d, 4, 1.0)) CHECK(p.nc.empty());
  }
  SUBCASE("Type-2 exemplar keeps two or three correlated neighbours inside the box") {
    const PartitionedDictionary d(exemplar_type2());
    int interior = 0, small = 0;
    for (int v = 0; v + 4 < 16; ++v)
      for (int u = 0; u + 4 < 8; ++u) {
        const auto p = split_neighborhood(d, {u, v}, 4, 0.2);
        ++interior;
        small += p.nc.size() == 2 || p.nc.size() == 3;
      }
    CHECK(2 * small > interior);
  }
  SUBCASE("invalid parameters") {
    const PartitionedDictionary d(exemplar_type2());
    CHECK_THROWS_AS(split_neighborhood(d, {0, 0}, 0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(split_neighborhood(d, {0, 0}, 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(split_neighborhood(d, {0, 0}, 4, 1.5), std::invalid_argument);
  }
}

TEST_CASE("correlated offsets agree across shapes of the same type") {
  const auto& shapes = default_inventory().shapes;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    for (std::size_t j = i + 1; j < shapes.size(); ++j) {
      const CanonicalShape& a = shapes[i];
      const CanonicalShape& b = shapes[j];
      if (a.type != b.type || a.mask.box_area() > 512 || b.mask.box_area() > 512) continue;
      const PartitionedDictionary da(a.mask), db(b.mask);
      const int w = std::min(da.width(), db.width());
      const int h = std::min(da.height(), db.height());
      int same = 0, total = 0;
      for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
          const auto pa = split_neighborhood(da, {u, v}, 4, 0.2);
          const auto pb = split_neighborhood(db, {u, v}, 4, 0.2);
          for (const Offset& o : causal_neighborhood(w, h, {u, v}, 4)) {
            const bool ina = std::find(pa.nc.begin(), pa.nc.end(), o) != pa.nc.end();
            const bool inb = std::find(pb.nc.begin(), pb.nc.end(), o) != pb.nc.end();
            same += ina == inb;
            ++total;
          }
        }
      }
      INFO("shapes " << a.id << " and " << b.id);
      CHECK(same >= 0.8 * total);
    }
  }
}

}  // namespace
}  // namespace nrec
