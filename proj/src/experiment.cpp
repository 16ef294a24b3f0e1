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

#include "nrec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nrec/baseline.hpp"
#include "nrec/block_codec.hpp"

namespace nrec {

namespace {

using json = nlohmann::json;

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2 * static_cast<std::size_t>(threads)) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([=, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string hash_line(std::uint64_t hash) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "# config_hash=%016llx\n", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (j.contains("shapes")) c.shapes = j["shapes"].get<std::vector<int>>();
    if (j.contains("corpus")) {
      const json& k = j["corpus"];
      c.corpus.source = k.value("source", c.corpus.source);
      c.corpus.synthetic.rho = k.value("rho", c.corpus.synthetic.rho);
      c.corpus.synthetic.sigma = k.value("sigma", c.corpus.synthetic.sigma);
      c.corpus.synthetic.seed = k.value("seed", c.corpus.synthetic.seed);
      c.corpus.current_frame = k.value("current_frame", c.corpus.current_frame);
      c.corpus.reference_frame = k.value("reference_frame", c.corpus.reference_frame);
      c.corpus.radius = k.value("radius", c.corpus.radius);
      c.corpus.blocks_per_shape = k.value("blocks_per_shape", c.corpus.blocks_per_shape);
    }
    c.step = j.value("step", c.step);
    c.target_bpp = j.value("target_bpp", c.target_bpp);
    c.eps_res = j.value("eps_res", c.eps_res);
    c.k_max = j.value("k_max", c.k_max);
    c.n_nbd = j.value("n_nbd", c.n_nbd);
    c.th_c = j.value("th_c", c.th_c);
    c.delta = j.value("delta", c.delta);
    if (j.contains("scheme")) {
      const auto k = parse_scheme(j["scheme"].get<std::string>());
      if (!k) throw ConfigError("unknown scheme " + j["scheme"].get<std::string>());
      c.scheme = *k;
    }
    c.seed = j.value("seed", c.seed);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.threads = j.value("threads", c.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["shapes"] = c.shapes;
  j["corpus"] = {{"source", c.corpus.source},
                 {"rho", c.corpus.synthetic.rho},
                 {"sigma", c.corpus.synthetic.sigma},
                 {"seed", c.corpus.synthetic.seed},
                 {"current_frame", c.corpus.current_frame},
                 {"reference_frame", c.corpus.reference_frame},
                 {"radius", c.corpus.radius},
                 {"blocks_per_shape", c.corpus.blocks_per_shape}};
  j["step"] = c.step;
  j["target_bpp"] = c.target_bpp;
  j["eps_res"] = c.eps_res;
  j["k_max"] = c.k_max;
  j["n_nbd"] = c.n_nbd;
  j["th_c"] = c.th_c;
  j["delta"] = c.delta;
  j["scheme"] = std::string(to_string(c.scheme));
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j.dump(1) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  // FNV-1a over the canonical dump; thread count and output location do not
  // affect results.
  ExperimentConfig key = c;
  key.output_dir.clear();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : config_to_json(key)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

void validate(const ExperimentConfig& c, const ShapeInventory& inventory) {
  for (int id : c.shapes)
    if (id < 0 || id >= static_cast<int>(inventory.shapes.size()))
      throw ConfigError("unknown shape id " + std::to_string(id));
  if (c.corpus.source != "synthetic" && c.corpus.source != "frames")
    throw ConfigError("corpus source must be synthetic or frames");
  if (c.corpus.source == "frames" && (c.corpus.current_frame.empty() || c.corpus.reference_frame.empty()))
    throw ConfigError("frames corpus needs current_frame and reference_frame");
  if (!(c.corpus.synthetic.rho >= 0.0 && c.corpus.synthetic.rho < 1.0)) throw ConfigError("rho must lie in [0,1)");
  if (!(c.corpus.synthetic.sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (c.corpus.radius < 0) throw ConfigError("radius must be non-negative");
  if (c.corpus.blocks_per_shape < 5) throw ConfigError("blocks_per_shape must be at least 5");
  if (c.step < 0.0) throw ConfigError("step must be non-negative");
  if (c.step == 0.0 && !(c.target_bpp > 0.0)) throw ConfigError("target_bpp must be positive");
  if (c.eps_res < 0.0) throw ConfigError("eps_res must be non-negative");
  if (c.k_max < 0) throw ConfigError("k_max must be non-negative");
  if (c.n_nbd < 1) throw ConfigError("n_nbd must be at least 1");
  if (!(c.th_c > 0.0 && c.th_c <= 1.0)) throw ConfigError("th_c must lie in (0,1]");
  if (!(c.delta >= 0.0)) throw ConfigError("delta must be non-negative");
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  if (c.scheme == SchemeKind::kCts) {
    for (int id : selected_shapes(c, inventory))
      if (!cts_eligible(inventory.shape(id)))
        throw ConfigError("shape " + std::to_string(id) + " is not eligible for cts");
  }
}

std::vector<int> selected_shapes(const ExperimentConfig& c, const ShapeInventory& inventory) {
  if (!c.shapes.empty()) return c.shapes;
  std::vector<int> ids;
  for (const CanonicalShape& s : inventory.shapes)
    if (c.scheme != SchemeKind::kCts || cts_eligible(s)) ids.push_back(s.id);
  return ids;
}

std::vector<RealGrid> transform_residuals(const PartitionedDictionary& dict,
                                          std::span<const ResidualBlock> residuals,
                                          const OmpParams& params, int threads) {
  dict.gram();
  std::vector<RealGrid> out(residuals.size());
  parallel_for(residuals.size(), threads, [&](std::size_t i) {
    const std::vector<double> x = support_samples(residuals[i], dict.support_mask());
    const SparseCode code = omp(dict, x, params);
    const std::vector<double> t = scaled_coefficients(code, dict);
    out[i].assign(t.begin(), t.end());
  });
  return out;
}

std::vector<CoefficientBlock> quantize_all(std::span<const RealGrid> grids, int width, int height,
                                           double step) {
  std::vector<CoefficientBlock> out;
  out.reserve(grids.size());
  for (const RealGrid& g : grids) {
    CoefficientBlock b(width, height);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const std::int32_t v = quantize(g[k], step);
      b.levels[k] = std::clamp(v, -kMaxAbsLevel, kMaxAbsLevel);
    }
    out.push_back(std::move(b));
  }
  return out;
}

double coded_bpp(std::span<const CoefficientBlock> blocks, int area) {
  if (blocks.empty()) return 0.0;
  const Scheme scheme = Scheme::baseline_pooled(blocks.front().width, blocks.front().height);
  const StreamResult r = encode_stream(scheme, CodecModels(scheme, CodecOptions{}), blocks);
  return 8.0 * static_cast<double>(r.payload.size()) / (static_cast<double>(blocks.size()) * area);
}

double calibrate_step(std::span<const RealGrid> grids, int width, int height, int area,
                      double target_bpp, std::size_t sample) {
  const std::span<const RealGrid> s = grids.first(std::min(sample, grids.size()));
  double lo = std::log(1e-3);
  double hi = std::log(1e5);
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double bpp = coded_bpp(quantize_all(s, width, height, std::exp(mid)), area);
    if (bpp > target_bpp) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Round to 4 significant digits so reports stay readable.
  const double step = std::exp(0.5 * (lo + hi));
  const double scale = std::pow(10.0, std::floor(std::log10(step)) - 3);
  return std::round(step / scale) * scale;
}

std::vector<ResidualBlock> make_residuals(const ExperimentConfig& c, const Mask& shape, int shape_id) {
  if (c.corpus.source == "frames") {
    const GrayImage cur = read_pgm(c.corpus.current_frame);
    const GrayImage ref = read_pgm(c.corpus.reference_frame);
    return gen_from_frames(cur, ref, shape, c.corpus.radius, c.corpus.blocks_per_shape).blocks;
  }
  SyntheticSpec spec = c.corpus.synthetic;
  spec.seed = block_seed(spec.seed, 0x5348415045ull + static_cast<std::uint64_t>(shape_id));
  return gen_synthetic(spec, shape, c.corpus.blocks_per_shape, c.threads);
}

ShapeData prepare_shape(const ExperimentConfig& c, const ShapeInventory& inventory, int shape_id) {
  const CanonicalShape& shape = inventory.shape(shape_id);
  ShapeData d{shape_id, shape.mask, PartitionedDictionary(shape.mask), {}, 0.0, {}, {}, {}, {}};
  const std::vector<ResidualBlock> residuals = make_residuals(c, shape.mask, shape_id);
  if (residuals.size() < 5) throw DataError("corpus has fewer than 5 blocks");
  d.coefficients = transform_residuals(d.dict, residuals, {c.eps_res, c.k_max, 1e8}, c.threads);
  d.step = c.step > 0.0 ? c.step
                        : calibrate_step(d.coefficients, d.dict.width(), d.dict.height(),
                                         d.dict.support_size(), c.target_bpp);
  d.blocks = quantize_all(d.coefficients, d.dict.width(), d.dict.height(), d.step);
  d.split = split(d.blocks.size(), c.seed);
  d.train = select(d.blocks, d.split.train);
  d.test = select(d.blocks, d.split.test);
  return d;
}

TrainedScheme train_scheme(const ShapeData& data, const CanonicalShape& shape, SchemeKind kind,
                           int n_nbd, double th_c, double delta) {
  TrainedScheme t;
  const int w = data.dict.width();
  const int h = data.dict.height();
  switch (kind) {
    case SchemeKind::kBaseline: t.scheme = Scheme::baseline(w, h); break;
    case SchemeKind::kBaselinePooled: t.scheme = Scheme::baseline_pooled(w, h); break;
    case SchemeKind::kCtf:
    case SchemeKind::kCtm: t.scheme = Scheme::ctf(data.dict, n_nbd, th_c); break;
    case SchemeKind::kCts: {
      t.simplified = build_cts(shape, data.dict, n_nbd, th_c, data.train.size());
      t.scheme = t.simplified->scheme;
      break;
    }
  }
  CountTable counts = count_br(t.scheme, data.train);
  if (kind == SchemeKind::kCtm || kind == SchemeKind::kCts) {
    MergedScheme m = merge_scheme(t.scheme, counts, delta);
    t.scheme = std::move(m.scheme);
    t.merges = std::move(m.details);
    if (t.simplified) t.simplified->scheme = t.scheme;
    counts = count_br(t.scheme, data.train);
  }
  t.model = ProbabilityModel::train(counts, Smoothing::kKt);
  return t;
}

Comparison compare(const EntropyReport& base, const EntropyReport& prop) {
  if (base.width != prop.width || base.height != prop.height || base.positions.size() != prop.positions.size())
    throw std::invalid_argument("reports cover different positions");
  Comparison c{base.width, base.height, {}, 0.0, 0.0, 0, 0};
  const int diag = std::max(base.width, base.height);
  for (std::size_t i = 0; i < base.positions.size(); ++i) {
    const PositionEntropy& a = base.positions[i];
    const PositionEntropy& b = prop.positions[i];
    if (!(a.pos == b.pos)) throw std::invalid_argument("reports cover different positions");
    PositionDelta d{a.pos, a.rank, a.h_ts(), b.h_ts(), a.h_ts() - b.h_ts(), a.pos.x + a.pos.y < diag,
                    a.symbols};
    c.dh += d.delta;
    if (d.delta < 0.0) ++c.np;
    if (d.top_left) {
      c.dh_tl += d.delta;
      if (d.delta < 0.0) ++c.np_tl;
    }
    c.rows.push_back(d);
  }
  return c;
}

ShapeResult evaluate_shape(const ShapeData& data, const CanonicalShape& shape, const ExperimentConfig& c) {
  ShapeResult r;
  r.shape_id = shape.id;
  r.type = shape.type;
  r.box = shape.sorted_box();
  r.step = data.step;
  r.bpp = coded_bpp(data.blocks, data.dict.support_size());
  r.kind = c.scheme;
  const SchemeKind base_kind =
      c.scheme == SchemeKind::kCts ? SchemeKind::kBaselinePooled : SchemeKind::kBaseline;
  r.baseline = train_scheme(data, shape, base_kind, c.n_nbd, c.th_c, c.delta);
  r.base_report = eval_hts(r.baseline.scheme, r.baseline.model, data.test);
  const bool proposed_is_baseline = c.scheme == SchemeKind::kBaseline || c.scheme == SchemeKind::kBaselinePooled;
  r.proposed = proposed_is_baseline && c.scheme == base_kind
                   ? r.baseline
                   : train_scheme(data, shape, c.scheme, c.n_nbd, c.th_c, c.delta);
  r.prop_report = eval_hts(r.proposed.scheme, r.proposed.model, data.test);
  r.comparison = compare(r.base_report, r.prop_report);
  const Scheme& s = r.proposed.scheme;
  r.ctx_total = s.total_contexts();
  r.ctx_total_without_c1 = r.ctx_total;
  if (!s.trees().empty()) r.ctx_total_without_c1 -= static_cast<int>(s.trees().size());
  r.ctx_per_model = c.scheme == SchemeKind::kCts
                        ? static_cast<double>(s.model_count())
                        : static_cast<double>(r.ctx_total) / std::max(1, s.model_count());
  return r;
}

SweepResult sweep(std::span<const ShapeData> shapes, double delta) {
  SweepResult r;
  const ShapeInventory& inv = default_inventory();
  for (int n_nbd : kSweepNbd) {
    for (double th_c : kSweepThc) {
      SweepPoint p{n_nbd, th_c, 0.0};
      for (const ShapeData& d : shapes) {
        const TrainedScheme t = train_scheme(d, inv.shape(d.shape_id), SchemeKind::kCtm, n_nbd, th_c, delta);
        p.total_h += eval_hts(t.scheme, t.model, d.test).sum_h_ts();
      }
      r.points.push_back(p);
    }
  }
  r.best = r.points.front();
  for (const SweepPoint& p : r.points)
    if (p.total_h < r.best.total_h - 1e-12) r.best = p;
  r.reference_wins = r.best.n_nbd == 4 && r.best.th_c == 0.2;
  return r;
}

std::string entropy_csv(const EntropyReport& report, int shape_id, ShapeType type, SchemeKind kind,
                        std::uint64_t hash) {
  std::ostringstream s;
  s << hash_line(hash) << "shape,type,scheme,x,y,rank,n_symbols,h_ts\n";
  for (const PositionEntropy& p : report.positions) {
    s << shape_id << ',' << type_number(type) << ',' << to_string(kind) << ',' << p.pos.x << ','
      << p.pos.y << ',' << p.rank << ',' << p.symbols << ',' << fmt(p.h_ts()) << '\n';
  }
  return s.str();
}

EntropyReport parse_entropy_csv(const std::string& text) {
  EntropyReport r;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("shape,type,scheme,x,y,rank,n_symbols,h_ts", 0) != 0)
        throw DataError("not an entropy report");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw DataError("malformed entropy report row: " + line);
    try {
      PositionEntropy p;
      p.pos = {std::stoi(f[3]), std::stoi(f[4])};
      p.rank = std::stoi(f[5]);
      p.symbols = std::stoull(f[6]);
      p.bits = std::stod(f[7]) * static_cast<double>(p.symbols);
      r.width = std::max(r.width, p.pos.x + 1);
      r.height = std::max(r.height, p.pos.y + 1);
      r.positions.push_back(p);
      r.bits += p.bits;
      r.symbols += p.symbols;
    } catch (const std::exception&) {
      throw DataError("malformed entropy report row: " + line);
    }
  }
  if (!header) throw DataError("not an entropy report");
  return r;
}

std::string comparison_csv(const Comparison& c, int shape_id, ShapeType type, std::uint64_t hash) {
  std::ostringstream s;
  s << hash_line(hash) << "shape,type,x,y,rank,H_base,H_prop,dH,in_top_left,n_symbols\n";
  for (const PositionDelta& d : c.rows) {
    s << shape_id << ',' << type_number(type) << ',' << d.pos.x << ',' << d.pos.y << ',' << d.rank << ','
      << fmt(d.h_base) << ',' << fmt(d.h_prop) << ',' << fmt(d.delta) << ',' << (d.top_left ? 1 : 0)
      << ',' << d.symbols << '\n';
  }
  return s.str();
}

std::string summary_csv(std::span<const ShapeResult> results, std::uint64_t hash) {
  std::ostringstream s;
  s << hash_line(hash)
    << "shape,B_d,Type,scheme,#ctx_aom,#ctx_aom_full,#ctx,ctx_total,ctx_total_no_c1,dH,dH_tl,#NP,#NP_tl,"
       "step,bpp\n";
  for (const ShapeResult& r : results) {
    s << r.shape_id << ",\"" << r.box.width << ',' << r.box.height << "\"," << type_number(r.type) << ','
      << to_string(r.kind) << ',' << kRegionClasses << ',' << kBaselineContexts << ','
      << fmt(r.ctx_per_model) << ',' << r.ctx_total << ',' << r.ctx_total_without_c1 << ','
      << fmt(r.comparison.dh) << ',' << fmt(r.comparison.dh_tl) << ',' << r.comparison.np << ','
      << r.comparison.np_tl << ',' << fmt(r.step) << ',' << fmt(r.bpp) << '\n';
  }
  return s.str();
}

std::string sweep_csv(const SweepResult& result, std::uint64_t hash) {
  std::ostringstream s;
  s << hash_line(hash) << "n_nbd,th_c,total_h_ts,best\n";
  for (const SweepPoint& p : result.points) {
    const bool best = p.n_nbd == result.best.n_nbd && p.th_c == result.best.th_c;
    s << p.n_nbd << ',' << fmt(p.th_c) << ',' << fmt(p.total_h) << ',' << (best ? 1 : 0) << '\n';
  }
  s << "# reference (4,0.2) wins: " << (result.reference_wins ? "yes" : "no") << '\n';
  return s.str();
}

std::vector<ShapeResult> run_pipeline(const ExperimentConfig& c) {
  const ShapeInventory& inv = default_inventory();
  validate(c, inv);
  const std::filesystem::path out(c.output_dir);
  std::filesystem::create_directories(out);
  const std::uint64_t hash = config_hash(c);
  write_text(out / "config.json", config_to_json(c));
  std::vector<ShapeResult> results;
  for (int id : selected_shapes(c, inv)) {
    const CanonicalShape& shape = inv.shape(id);
    const ShapeData data = prepare_shape(c, inv, id);
    ShapeResult r = evaluate_shape(data, shape, c);
    const std::string tag = std::to_string(id);
    const SchemeKind base_kind = r.baseline.scheme.kind();
    write_text(out / ("model_" + tag + "_" + std::string(to_string(base_kind)) + ".json"),
               model_to_json({id, {c.n_nbd, c.th_c, c.delta}, r.baseline.scheme, r.baseline.model}));
    write_text(out / ("model_" + tag + "_" + std::string(to_string(c.scheme)) + ".json"),
               model_to_json({id, {c.n_nbd, c.th_c, c.delta}, r.proposed.scheme, r.proposed.model}));
    write_text(out / ("h_" + tag + "_" + std::string(to_string(base_kind)) + ".csv"),
               entropy_csv(r.base_report, id, shape.type, base_kind, hash));
    write_text(out / ("h_" + tag + "_" + std::string(to_string(c.scheme)) + ".csv"),
               entropy_csv(r.prop_report, id, shape.type, c.scheme, hash));
    write_text(out / ("dh_" + tag + ".csv"), comparison_csv(r.comparison, id, shape.type, hash));
    std::vector<double> grid;
    for (const PositionDelta& d : r.comparison.rows) grid.push_back(d.delta);
    write_pgm(out / ("dh_" + tag + ".pgm"), r.comparison.width, r.comparison.height,
              diverging_pixels(grid, kHeatmapLimit));
    write_text(out / ("dh_" + tag + ".svg"),
               heatmap_svg(r.comparison.width, r.comparison.height, grid, kHeatmapLimit));
    results.push_back(std::move(r));
  }
  write_text(out / "summary.csv", summary_csv(results, hash));
  return results;
}

}  // namespace nrec
