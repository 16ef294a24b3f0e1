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

// Command-line driver for the nrec experiment modules.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nrec/block_codec.hpp"
#include "nrec/corpus.hpp"
#include "nrec/dictionary.hpp"
#include "nrec/experiment.hpp"
#include "nrec/geometry.hpp"
#include "nrec/io.hpp"
#include "nrec/probability.hpp"
#include "nrec/range_coder.hpp"
#include "nrec/simplified.hpp"
#include "nrec/sparse.hpp"

namespace fs = std::filesystem;
using namespace nrec;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  const std::vector<std::uint8_t> bytes = read_file(path);
  return config_from_json(std::string(bytes.begin(), bytes.end()));
}

const CanonicalShape& shape_or_throw(int id) {
  const ShapeInventory& inv = default_inventory();
  if (id < 0 || id >= static_cast<int>(inv.shapes.size()))
    throw ConfigError("unknown shape id " + std::to_string(id));
  return inv.shape(id);
}

void check_dims(const Int16Grids& g, const Mask& m) {
  if (g.width != m.width() || g.height != m.height())
    throw DataError("block file is " + std::to_string(g.width) + "x" + std::to_string(g.height) +
                    ", shape box is " + std::to_string(m.width()) + "x" + std::to_string(m.height()));
}

ModelDocument load_model(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  return model_from_json(std::string(bytes.begin(), bytes.end()));
}

std::string read_text(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text(out, text);
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ----------------------------------------------------------------------------

std::string shapes_csv() {
  std::ostringstream s;
  s << "id,box_w,box_h,r_a,type,occurrences\n";
  for (const CanonicalShape& c : default_inventory().shapes) {
    s << c.id << ',' << c.mask.width() << ',' << c.mask.height() << ',' << fmt(c.r_a) << ','
      << type_number(c.type) << ',' << c.occurrences << '\n';
  }
  return s.str();
}

void shapes_dump(const fs::path& dir) {
  fs::create_directories(dir);
  const ShapeInventory& inv = default_inventory();
  for (const CanonicalShape& c : inv.shapes) {
    const auto cells = c.mask.cells();
    write_pgm(dir / ("shape_" + std::to_string(c.id) + ".pgm"), c.mask.width(), c.mask.height(),
              std::vector<std::uint8_t>(cells.begin(), cells.end()), 1);
  }
  std::ostringstream s;
  s << "block_w,block_h,wedge,region,rectangular,shape,chain\n";
  for (const RegionMapping& m : inv.regions) {
    s << m.spec.block.width << ',' << m.spec.block.height << ',' << m.spec.wedge_index << ','
      << m.spec.region << ',' << (m.rectangular ? 1 : 0) << ',' << m.shape_id << ',';
    for (std::size_t i = 0; i < m.chain.size(); ++i) s << (i ? ";" : "") << to_string(m.chain[i]);
    s << '\n';
  }
  write_text(dir / "regions.csv", s.str());
  write_text(dir / "shapes.csv", shapes_csv());
}

void dict_build(int id, const std::string& out) {
  const CanonicalShape& shape = shape_or_throw(id);
  const PartitionedDictionary d(shape.mask);
  int degenerate = 0;
  for (int k = 0; k < d.atom_count(); ++k) degenerate += d.degenerate(k) ? 1 : 0;
  std::cerr << "shape " << id << ": " << d.width() << "x" << d.height() << " box, " << d.atom_count()
            << " atoms over " << d.support_size() << " samples, " << degenerate << " degenerate\n";
  std::ostringstream s;
  s << "u,v,restriction_norm\n";
  for (int k = 0; k < d.atom_count(); ++k) {
    const Freq f = d.freq(k);
    s << f.u << ',' << f.v << ',' << fmt(d.restriction_norm(k)) << '\n';
  }
  emit(out, s.str());
}

Freq parse_pos(const std::string& text) {
  Freq f;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> f.u >> comma >> f.v) || comma != ',') throw ConfigError("position must be u,v");
  return f;
}

void dict_corr(int id, const std::string& pos, int radius, const std::string& out) {
  const CanonicalShape& shape = shape_or_throw(id);
  const PartitionedDictionary d(shape.mask);
  const Freq f = parse_pos(pos);
  if (!d.contains(f)) throw ConfigError("position outside the shape box");
  const CorrelationMap map = correlation_map(d, f, radius);
  std::cerr << "checkerboard ratio " << fmt(checkerboard_ratio(map)) << '\n';
  if (fs::path(out).extension() == ".pgm") {
    std::vector<std::uint8_t> px;
    for (double v : map.values) px.push_back(std::isnan(v) ? 0 : static_cast<std::uint8_t>(std::lround(255 * v)));
    write_pgm(out, map.side(), map.side(), px);
    return;
  }
  std::ostringstream s;
  for (int dv = -radius; dv <= radius; ++dv) {
    for (int du = -radius; du <= radius; ++du) {
      const double v = map.at(du, dv);
      s << (du > -radius ? "," : "") << (std::isnan(v) ? "" : fmt(v));
    }
    s << '\n';
  }
  emit(out, s.str());
}

void corpus_gen(const ExperimentConfig& c, int id, const std::string& out) {
  const CanonicalShape& shape = shape_or_throw(id);
  validate(c, default_inventory());
  write_nrtx(out, to_grids(make_residuals(c, shape.mask, id)));
}

void tx_encode(int id, const std::string& in, double step, double eps, int kmax, int threads,
               const std::string& out) {
  const CanonicalShape& shape = shape_or_throw(id);
  if (!(step > 0.0)) throw ConfigError("step must be positive");
  const Int16Grids g = read_nrtx(in);
  check_dims(g, shape.mask);
  const PartitionedDictionary d(shape.mask);
  const std::vector<ResidualBlock> res = to_residuals(g);
  const auto grids = transform_residuals(d, res, {eps, kmax, 1e8}, threads);
  write_nrtx(out, to_grids(quantize_all(grids, d.width(), d.height(), step)));
}

void tx_decode(int id, const std::string& in, double step, const std::string& out) {
  const CanonicalShape& shape = shape_or_throw(id);
  const Int16Grids g = read_nrtx(in);
  check_dims(g, shape.mask);
  const PartitionedDictionary d(shape.mask);
  std::vector<ResidualBlock> res;
  for (const CoefficientBlock& b : to_coefficients(g)) {
    const NrSignal s = reconstruct(b, {step}, d);
    ResidualBlock r{d.width(), d.height(), std::vector<std::int16_t>(d.atom_count(), 0)};
    for (std::size_t i = 0; i < s.samples.size(); ++i)
      r.samples[d.support()[i]] = static_cast<std::int16_t>(std::lround(s.samples[i]));
    res.push_back(std::move(r));
  }
  write_nrtx(out, to_grids(res));
}

void train_cmd(int id, const std::string& in, SchemeKind kind, int n_nbd, double th_c, double delta,
               const std::string& out) {
  const CanonicalShape& shape = shape_or_throw(id);
  const Int16Grids g = read_nrtx(in);
  check_dims(g, shape.mask);
  ExperimentConfig c;
  c.n_nbd = n_nbd;
  c.th_c = th_c;
  c.delta = delta;
  c.scheme = kind;
  c.shapes = {id};
  validate(c, default_inventory());
  ShapeData data{id, shape.mask, PartitionedDictionary(shape.mask), {}, 0.0, to_coefficients(g), {}, {}, {}};
  data.train = data.blocks;
  const TrainedScheme t = train_scheme(data, shape, kind, n_nbd, th_c, delta);
  std::cerr << to_string(kind) << ": " << t.scheme.model_count() << " models, "
            << t.scheme.total_contexts() << " contexts\n";
  write_text(out, model_to_json({id, {n_nbd, th_c, delta}, t.scheme, t.model}));
}

void merge_cmd(const std::string& in, double delta, const std::string& out) {
  ModelDocument doc = load_model(in);
  if (doc.scheme.trees().empty()) throw DataError("model has no context trees to merge");
  for (const ContextTree& t : doc.scheme.trees())
    if (t.merged()) throw DataError("model trees are already merged");
  const CountTable& full = doc.model.counts();
  const MergedScheme m = merge_scheme(doc.scheme, full, delta);
  std::vector<std::vector<BrCounts>> tables;
  for (int model = 0; model < m.scheme.model_count(); ++model) {
    const ContextTree& tree = m.scheme.trees()[model];
    std::vector<BrCounts> t(tree.leaf_count());
    const auto src = full.model(model);
    for (int f = 0; f < tree.full_leaf_count(); ++f)
      for (int k = 0; k < kBrSymbols; ++k) t[tree.leaf_of_full()[f]][k] += src[f][k];
    tables.push_back(std::move(t));
  }
  doc.params.delta = delta;
  doc.model = ProbabilityModel::train(CountTable(std::move(tables)), doc.model.smoothing());
  doc.scheme = m.scheme;
  std::cerr << "merged to " << doc.scheme.total_contexts() << " contexts\n";
  write_text(out, model_to_json(doc));
}

void eval_cmd(const std::string& model_path, const std::string& in, const std::string& out) {
  const ModelDocument doc = load_model(model_path);
  const Int16Grids g = read_nrtx(in);
  if (g.width != doc.scheme.width() || g.height != doc.scheme.height())
    throw DataError("block file does not match the model dimensions");
  const EntropyReport r = eval_hts(doc.scheme, doc.model, to_coefficients(g));
  std::cerr << "mean H_ts " << fmt(r.mean_bits()) << " bits/symbol over " << r.symbols << " symbols\n";
  const ShapeType type = shape_or_throw(doc.shape_id).type;
  emit(out, entropy_csv(r, doc.shape_id, type, doc.scheme.kind(), 0));
}

void compare_cmd(const std::string& base, const std::string& prop, const std::string& out,
                 const std::string& pgm, const std::string& svg) {
  const Comparison c = compare(parse_entropy_csv(read_text(base)), parse_entropy_csv(read_text(prop)));
  std::cerr << "dH " << fmt(c.dh) << " dH_tl " << fmt(c.dh_tl) << " #NP " << c.np << " #NP_tl "
            << c.np_tl << '\n';
  std::vector<double> grid;
  for (const PositionDelta& d : c.rows) grid.push_back(d.delta);
  if (!pgm.empty()) write_pgm(pgm, c.width, c.height, diverging_pixels(grid, kHeatmapLimit));
  if (!svg.empty()) write_text(svg, heatmap_svg(c.width, c.height, grid, kHeatmapLimit));
  emit(out, comparison_csv(c, -1, ShapeType::kType1, 0));
}

void sweep_cmd(const ExperimentConfig& c, const std::string& out) {
  const ShapeInventory& inv = default_inventory();
  validate(c, inv);
  std::vector<ShapeData> shapes;
  for (int id : selected_shapes(c, inv)) shapes.push_back(prepare_shape(c, inv, id));
  const SweepResult r = sweep(shapes, c.delta);
  std::cerr << "best n_nbd=" << r.best.n_nbd << " th_c=" << fmt(r.best.th_c)
            << (r.reference_wins ? " (reference point wins)\n" : "\n");
  emit(out, sweep_csv(r, config_hash(c)));
}

void codec_encode(const std::string& model_path, const std::string& in, bool adaptive, bool zero_flag,
                  const std::string& out) {
  const ModelDocument doc = load_model(model_path);
  const Int16Grids g = read_nrtx(in);
  if (g.width != doc.scheme.width() || g.height != doc.scheme.height())
    throw DataError("block file does not match the model dimensions");
  const std::vector<CoefficientBlock> blocks = to_coefficients(g);
  const CodecOptions opt{adaptive, zero_flag};
  const StreamResult r = encode_stream(doc.scheme, CodecModels(doc.scheme, doc.model, opt), blocks);
  NrecStream s{doc.shape_id, adaptive, zero_flag, g.width, g.height,
               static_cast<std::uint32_t>(blocks.size()), r.payload};
  write_file(out, encode_nrec(s));
  const double area = static_cast<double>(shape_or_throw(doc.shape_id).mask.area());
  std::cerr << r.payload.size() << " bytes, " << fmt(8.0 * r.payload.size() / (blocks.size() * area))
            << " bpp (br " << fmt(r.bits.br) << ", lr " << fmt(r.bits.lr) << ", hr " << fmt(r.bits.hr)
            << ", sign " << fmt(r.bits.sign) << ", flag " << fmt(r.bits.flag) << " bits)\n";
}

void codec_decode(const std::string& model_path, const std::string& in, const std::string& out) {
  const ModelDocument doc = load_model(model_path);
  const NrecStream s = decode_nrec(read_file(in));
  if (s.shape_id != doc.shape_id || s.width != doc.scheme.width() || s.height != doc.scheme.height())
    throw DataError("stream does not match the model");
  const CodecOptions opt{s.adaptive, s.zero_flag};
  const auto blocks = decode_stream(doc.scheme, CodecModels(doc.scheme, doc.model, opt), s.payload, s.block_count);
  write_nrtx(out, to_grids(blocks));
}

void run_cmd(const ExperimentConfig& c) {
  const std::vector<ShapeResult> results = run_pipeline(c);
  std::cout << summary_csv(results, config_hash(c));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy coding experiments for non-rectangular transform blocks"};
  app.require_subcommand(1);

  std::string config_path, in, out, base, prop, pgm, svg, model, pos, scheme_name = "ctm";
  int shape = -1, kmax = 0, radius = 2, threads = 1, n_nbd = 4;
  double step = 0.0, eps = 1e-3, th_c = 0.2, delta = kDefaultDelta;
  bool static_model = false, no_zero_flag = false;

  auto* shapes = app.add_subcommand("shapes", "Canonical NR shape inventory");
  shapes->require_subcommand(1);
  auto* shapes_list = shapes->add_subcommand("list", "Print the inventory as CSV");
  shapes_list->add_option("--out", out, "Output CSV (default stdout)");
  auto* shapes_dump_cmd = shapes->add_subcommand("dump", "Write mask PGMs and region mapping");
  shapes_dump_cmd->add_option("--dir", out, "Output directory")->required();

  auto* dict = app.add_subcommand("dict", "Partitioned DCT dictionaries");
  dict->require_subcommand(1);
  auto* dict_build_cmd = dict->add_subcommand("build", "Print atom restriction norms");
  dict_build_cmd->add_option("--shape", shape, "Shape id")->required();
  dict_build_cmd->add_option("--out", out, "Output CSV (default stdout)");
  auto* dict_corr_cmd = dict->add_subcommand("corr", "Atom correlation map around a position");
  dict_corr_cmd->add_option("--shape", shape, "Shape id")->required();
  dict_corr_cmd->add_option("--pos", pos, "Centre frequency u,v")->required();
  dict_corr_cmd->add_option("--radius", radius, "Window radius")->check(CLI::Range(0, 31));
  dict_corr_cmd->add_option("--out", out, "Output .csv or .pgm (default stdout CSV)");

  auto* corpus = app.add_subcommand("corpus", "Generate residual blocks for one shape");
  corpus->add_option("--config", config_path, "Experiment JSON");
  corpus->add_option("--shape", shape, "Shape id")->required();
  corpus->add_option("--out", out, "Output NRTX file")->required();

  auto* tx = app.add_subcommand("tx", "Sparse transform of residual blocks");
  tx->require_subcommand(1);
  auto* tx_enc = tx->add_subcommand("encode", "Residual blocks to quantized levels");
  tx_enc->add_option("--shape", shape, "Shape id")->required();
  tx_enc->add_option("--in", in, "Residual NRTX file")->required();
  tx_enc->add_option("--step", step, "Quantizer step")->required();
  tx_enc->add_option("--eps", eps, "Relative residual tolerance");
  tx_enc->add_option("--kmax", kmax, "Atom limit (0 = support/4)");
  tx_enc->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  tx_enc->add_option("--out", out, "Level NRTX file")->required();
  auto* tx_dec = tx->add_subcommand("decode", "Quantized levels back to residual samples");
  tx_dec->add_option("--shape", shape, "Shape id")->required();
  tx_dec->add_option("--in", in, "Level NRTX file")->required();
  tx_dec->add_option("--step", step, "Quantizer step")->required();
  tx_dec->add_option("--out", out, "Residual NRTX file")->required();

  auto* train = app.add_subcommand("train", "Train a context model on level blocks");
  train->add_option("--shape", shape, "Shape id")->required();
  train->add_option("--in", in, "Level NRTX file")->required();
  train->add_option("--scheme", scheme_name, "baseline, baseline_pooled, ctf, ctm or cts");
  train->add_option("--n-nbd", n_nbd, "Neighbourhood radius");
  train->add_option("--th-c", th_c, "Correlation threshold");
  train->add_option("--delta", delta, "Merge threshold in bits per symbol");
  train->add_option("--out", out, "Model JSON")->required();

  auto* merge = app.add_subcommand("merge", "Merge the leaves of a full-tree model");
  merge->add_option("--model", model, "Full-tree model JSON")->required();
  merge->add_option("--delta", delta, "Merge threshold in bits per symbol");
  merge->add_option("--out", out, "Merged model JSON")->required();

  auto* eval = app.add_subcommand("eval", "Per-position cross entropy of a model on level blocks");
  eval->add_option("--model", model, "Model JSON")->required();
  eval->add_option("--in", in, "Level NRTX file")->required();
  eval->add_option("--out", out, "Entropy CSV (default stdout)");

  auto* cmp = app.add_subcommand("compare", "Per-position entropy difference of two reports");
  cmp->add_option("--base", base, "Baseline entropy CSV")->required();
  cmp->add_option("--prop", prop, "Proposed entropy CSV")->required();
  cmp->add_option("--out", out, "Difference CSV (default stdout)");
  cmp->add_option("--pgm", pgm, "Heatmap PGM");
  cmp->add_option("--svg", svg, "Heatmap SVG");

  auto* sweep_sub = app.add_subcommand("sweep", "Grid search over n_nbd and th_c");
  sweep_sub->add_option("--config", config_path, "Experiment JSON");
  sweep_sub->add_option("--out", out, "Sweep CSV (default stdout)");

  auto* codec = app.add_subcommand("codec", "Range-coded streams of level blocks");
  codec->require_subcommand(1);
  auto* codec_enc = codec->add_subcommand("encode", "Level blocks to an NREC stream");
  codec_enc->add_option("--model", model, "Model JSON")->required();
  codec_enc->add_option("--in", in, "Level NRTX file")->required();
  codec_enc->add_flag("--static", static_model, "Do not adapt the BR tables");
  codec_enc->add_flag("--no-zero-flag", no_zero_flag, "Omit the per-block all-zero flag");
  codec_enc->add_option("--out", out, "NREC stream")->required();
  auto* codec_dec = codec->add_subcommand("decode", "NREC stream back to level blocks");
  codec_dec->add_option("--model", model, "Model JSON")->required();
  codec_dec->add_option("--in", in, "NREC stream")->required();
  codec_dec->add_option("--out", out, "Level NRTX file")->required();

  auto* run = app.add_subcommand("run", "Full experiment pipeline");
  run->add_option("--config", config_path, "Experiment JSON");
  run->add_option("--out-dir", out, "Override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (shapes_list->parsed()) {
      emit(out, shapes_csv());
    } else if (shapes_dump_cmd->parsed()) {
      shapes_dump(out);
    } else if (dict_build_cmd->parsed()) {
      dict_build(shape, out);
    } else if (dict_corr_cmd->parsed()) {
      dict_corr(shape, pos, radius, out);
    } else if (corpus->parsed()) {
      corpus_gen(load_config(config_path), shape, out);
    } else if (tx_enc->parsed()) {
      tx_encode(shape, in, step, eps, kmax, threads, out);
    } else if (tx_dec->parsed()) {
      tx_decode(shape, in, step, out);
    } else if (train->parsed()) {
      const auto kind = parse_scheme(scheme_name);
      if (!kind) throw ConfigError("unknown scheme " + scheme_name);
      train_cmd(shape, in, *kind, n_nbd, th_c, delta, out);
    } else if (merge->parsed()) {
      merge_cmd(model, delta, out);
    } else if (eval->parsed()) {
      eval_cmd(model, in, out);
    } else if (cmp->parsed()) {
      compare_cmd(base, prop, out, pgm, svg);
    } else if (sweep_sub->parsed()) {
      sweep_cmd(load_config(config_path), out);
    } else if (codec_enc->parsed()) {
      codec_encode(model, in, !static_model, !no_zero_flag, out);
    } else if (codec_dec->parsed()) {
      codec_decode(model, in, out);
    } else if (run->parsed()) {
      ExperimentConfig c = load_config(config_path);
      if (!out.empty()) c.output_dir = out;
      run_cmd(c);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DecodeError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
