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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nrec/experiment.hpp"
#include "test_support.hpp"

namespace nrec {
namespace {

namespace fs = std::filesystem;

EntropyReport report(int w, int h, const std::vector<double>& bits_per_symbol) {
  EntropyReport r{w, h, {}, 0, 0.0};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      PositionEntropy p{{x, y}, 0, 100, 100 * bits_per_symbol[y * w + x]};
      r.positions.push_back(p);
      r.symbols += p.symbols;
      r.bits += p.bits;
    }
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ShapeData data_from_blocks(int shape_id, std::vector<CoefficientBlock> blocks) {
  const CanonicalShape& s = default_inventory().shape(shape_id);
  ShapeData d{shape_id, s.mask, PartitionedDictionary(s.mask), {}, 1.0, std::move(blocks), {}, {}, {}};
  d.split = split(d.blocks.size(), 1);
  d.train = select(d.blocks, d.split.train);
  d.test = select(d.blocks, d.split.test);
  return d;
}

TEST_CASE("config parsing and validation") {
  const ExperimentConfig c = config_from_json(R"({"shapes":[0,4],"corpus":{"rho":0.5,"blocks_per_shape":100},
      "n_nbd":3,"th_c":0.15,"delta":0.01,"scheme":"cts","seed":9,"threads":2})");
  CHECK(c.shapes == std::vector<int>{0, 4});
  CHECK(c.corpus.synthetic.rho == 0.5);
  CHECK(c.corpus.blocks_per_shape == 100);
  CHECK(c.n_nbd == 3);
  CHECK(c.scheme == SchemeKind::kCts);
  CHECK(c.threads == 2);
  const ExperimentConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(config_hash(back) == config_hash(c));

  ExperimentConfig other = c;
  other.threads = 1;
  other.output_dir = "elsewhere";
  CHECK(config_hash(other) == config_hash(c));
  other.n_nbd = 4;
  CHECK(config_hash(other) != config_hash(c));

  CHECK_THROWS_AS(config_from_json("[1"), ConfigError);
  CHECK_THROWS_AS(config_from_json("3"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"scheme":"magic"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"n_nbd":"four"})"), ConfigError);

  const ShapeInventory& inv = default_inventory();
  CHECK_NOTHROW(validate(c, inv));
  auto rejects = [&](auto mutate) {
    ExperimentConfig b = c;
    mutate(b);
    CHECK_THROWS_AS(validate(b, inv), ConfigError);
  };
  rejects([](ExperimentConfig& b) { b.shapes = {99}; });
  rejects([](ExperimentConfig& b) { b.shapes = {2}; });
  rejects([](ExperimentConfig& b) { b.n_nbd = 0; });
  rejects([](ExperimentConfig& b) { b.th_c = 0.0; });
  rejects([](ExperimentConfig& b) { b.delta = -1; });
  rejects([](ExperimentConfig& b) { b.corpus.source = "camera"; });
  rejects([](ExperimentConfig& b) { b.corpus.source = "frames"; });
  rejects([](ExperimentConfig& b) { b.corpus.blocks_per_shape = 4; });
  rejects([](ExperimentConfig& b) { b.threads = 0; });

  ExperimentConfig all;
  all.scheme = SchemeKind::kCts;
  CHECK(selected_shapes(all, inv) == cts_shape_ids(inv));
  all.scheme = SchemeKind::kCtm;
  CHECK(selected_shapes(all, inv).size() == inv.shapes.size());
}

TEST_CASE("comparison of entropy reports") {
  const EntropyReport a = report(2, 2, {1.0, 0.5, 0.5, 0.2});
  SUBCASE("identical reports") {
    const Comparison c = compare(a, a);
    CHECK(c.dh == 0.0);
    CHECK(c.np == 0);
    for (const auto& r : c.rows) CHECK(r.delta == 0.0);
  }
  SUBCASE("hand-made deltas") {
    const EntropyReport b = report(2, 2, {0.75, 0.75, 0.5, 0.1});
    const Comparison c = compare(a, b);
    CHECK(c.rows[0].delta == doctest::Approx(0.25));
    CHECK(c.rows[1].delta == doctest::Approx(-0.25));
    CHECK(c.rows[2].delta == doctest::Approx(0.0));
    CHECK(c.rows[3].delta == doctest::Approx(0.1));
    CHECK(c.dh == doctest::Approx(0.1));
    CHECK(c.np == 1);
    // x + y < 2 marks the top-left triangle.
    CHECK(c.rows[3].top_left == false);
    CHECK(c.dh_tl == doctest::Approx(0.0));
    CHECK(c.np_tl == 1);
  }
  SUBCASE("mismatched reports") {
    CHECK_THROWS_AS(compare(a, report(1, 4, {1, 1, 1, 1})), std::invalid_argument);
  }
}

TEST_CASE("entropy CSV round trip") {
  const EntropyReport a = report(4, 2, {1.0, 0.5, 0.25, 0.125, 2.0, 0.0, 1.5, 0.75});
  const std::string text = entropy_csv(a, 3, ShapeType::kType1, SchemeKind::kCtm, 0xabc);
  CHECK(text.rfind("# config_hash=0000000000000abc\n", 0) == 0);
  const EntropyReport b = parse_entropy_csv(text);
  CHECK(b.width == 4);
  CHECK(b.height == 2);
  for (std::size_t i = 0; i < a.positions.size(); ++i)
    CHECK(b.positions[i].h_ts() == doctest::Approx(a.positions[i].h_ts()));
  CHECK_THROWS_AS(parse_entropy_csv("nope\n"), DataError);
  CHECK_THROWS_AS(parse_entropy_csv("shape,type,scheme,x,y,rank,n_symbols,h_ts\n1,2\n"), DataError);
}

TEST_CASE("sweep over an all-zero corpus ties everywhere") {
  std::vector<ShapeData> shapes;
  shapes.push_back(data_from_blocks(0, std::vector<CoefficientBlock>(50, CoefficientBlock(4, 8))));
  const SweepResult r = sweep(shapes, kDefaultDelta);
  CHECK(r.points.size() == 12);
  for (const SweepPoint& p : r.points) CHECK(p.total_h == doctest::Approx(r.points.front().total_h));
  CHECK(r.best.n_nbd == 2);
  CHECK(r.best.th_c == 0.09);
  CHECK_FALSE(r.reference_wins);
  const std::string csv = sweep_csv(r, 1);
  CHECK(csv.find("2,0.09,") != std::string::npos);
}

TEST_CASE("sweep is deterministic") {
  std::vector<ShapeData> shapes;
  const CanonicalShape& s = default_inventory().shape(4);
  shapes.push_back(data_from_blocks(4, testing::random_blocks(s.mask.width(), s.mask.height(), 400, 3)));
  const SweepResult a = sweep(shapes, kDefaultDelta);
  const SweepResult b = sweep(shapes, kDefaultDelta);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].total_h == b.points[i].total_h);
  int winners = 0;
  for (const SweepPoint& p : a.points) {
    CHECK(p.total_h >= a.best.total_h - 1e-12);
    winners += p.n_nbd == a.best.n_nbd && p.th_c == a.best.th_c;
  }
  CHECK(winners == 1);
}

TEST_CASE("calibrated step hits the target rate") {
  ExperimentConfig c;
  c.shapes = {4};
  c.corpus.blocks_per_shape = 400;
  const ShapeData d = prepare_shape(c, default_inventory(), 4);
  CHECK(d.step > 0.0);
  CHECK(coded_bpp(d.blocks, d.dict.support_size()) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(d.train.size() == 320);
  CHECK(d.test.size() == 80);
}

TEST_CASE("pipeline output is deterministic") {
  ExperimentConfig c;
  c.shapes = {0, 4};
  c.corpus.blocks_per_shape = 300;
  const fs::path root = fs::temp_directory_path() / "nrec_test_pipeline";
  fs::remove_all(root);
  c.output_dir = (root / "a").string();
  const auto ra = run_pipeline(c);
  c.output_dir = (root / "b").string();
  c.threads = 3;
  run_pipeline(c);
  CHECK(ra.size() == 2);
  int files = 0;
  for (const auto& e : fs::directory_iterator(root / "a")) {
    const fs::path name = e.path().filename();
    if (name == "config.json") continue;
    INFO(name.string());
    CHECK(slurp(e.path()) == slurp(root / "b" / name));
    ++files;
  }
  // Two models, two entropy reports and three delta files per shape, plus the summary.
  CHECK(files == 2 * 7 + 1);
  const std::string summary = slurp(root / "a" / "summary.csv");
  CHECK(summary.find("shape,B_d,Type,scheme,") != std::string::npos);

  // Baseline and proposed reports cover the same positions.
  const EntropyReport base = parse_entropy_csv(slurp(root / "a" / "h_4_baseline.csv"));
  const EntropyReport prop = parse_entropy_csv(slurp(root / "a" / "h_4_ctm.csv"));
  REQUIRE(base.positions.size() == prop.positions.size());
  for (std::size_t i = 0; i < base.positions.size(); ++i) {
    CHECK(base.positions[i].pos == prop.positions[i].pos);
    CHECK(base.positions[i].symbols == prop.positions[i].symbols);
  }
  fs::remove_all(root);
}

}  // namespace
}  // namespace nrec
