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

#include "nrec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace nrec {

namespace {

using json = nlohmann::json;

constexpr char kNrtxMagic[4] = {'N', 'R', 'T', 'X'};
constexpr char kNrecMagic[4] = {'N', 'R', 'E', 'C'};

void put_u16(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  put_u16(out, v & 0xFFFF);
  put_u16(out, v >> 16);
}

std::uint32_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8);
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return get_u16(b, at) | (get_u16(b, at + 2) << 16);
}

std::string leaf_kind(Leaf::Kind k) {
  switch (k) {
    case Leaf::Kind::kAllZero: return "zero";
    case Leaf::Kind::kRange: return "range";
    case Leaf::Kind::kSaturated: return "saturated";
  }
  return "?";
}

json offsets_json(const std::vector<Offset>& v) {
  json a = json::array();
  for (const Offset& o : v) a.push_back({o.du, o.dv});
  return a;
}

std::vector<Offset> offsets_from(const json& a) {
  std::vector<Offset> v;
  for (const json& o : a) v.push_back({o.at(0).get<int>(), o.at(1).get<int>()});
  return v;
}

json counts_json(std::span<const BrCounts> counts) {
  json a = json::array();
  for (const BrCounts& c : counts) a.push_back({c[0], c[1], c[2], c[3]});
  return a;
}

std::vector<BrCounts> counts_from(const json& a) {
  std::vector<BrCounts> v;
  for (const json& c : a) {
    BrCounts b{};
    for (int i = 0; i < kBrSymbols; ++i) b[i] = c.at(i).get<std::uint64_t>();
    v.push_back(b);
  }
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_nrtx(const Int16Grids& g) {
  if (g.width < 1 || g.width > 255 || g.height < 1 || g.height > 255)
    throw DataError("NRTX dimensions must fit in one byte");
  if (g.grids.size() > 0xFFFF) throw DataError("NRTX holds at most 65535 blocks");
  std::vector<std::uint8_t> out(kNrtxMagic, kNrtxMagic + 4);
  out.push_back(static_cast<std::uint8_t>(g.width));
  out.push_back(static_cast<std::uint8_t>(g.height));
  put_u16(out, static_cast<std::uint32_t>(g.grids.size()));
  const std::size_t n = static_cast<std::size_t>(g.width) * g.height;
  for (const auto& grid : g.grids) {
    if (grid.size() != n) throw DataError("NRTX grid size mismatch");
    for (std::int16_t v : grid) put_u16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

Int16Grids decode_nrtx(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || !std::equal(kNrtxMagic, kNrtxMagic + 4, bytes.begin()))
    throw DataError("not an NRTX file");
  Int16Grids g;
  g.width = bytes[4];
  g.height = bytes[5];
  const std::uint32_t count = get_u16(bytes, 6);
  const std::size_t n = static_cast<std::size_t>(g.width) * g.height;
  if (n == 0 || bytes.size() != 8 + count * n * 2) throw DataError("NRTX payload size mismatch");
  std::size_t at = 8;
  g.grids.resize(count);
  for (auto& grid : g.grids) {
    grid.resize(n);
    for (std::int16_t& v : grid) {
      v = static_cast<std::int16_t>(static_cast<std::uint16_t>(get_u16(bytes, at)));
      at += 2;
    }
  }
  return g;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

void write_nrtx(const std::filesystem::path& path, const Int16Grids& grids) {
  write_file(path, encode_nrtx(grids));
}

Int16Grids read_nrtx(const std::filesystem::path& path) { return decode_nrtx(read_file(path)); }

Int16Grids to_grids(std::span<const ResidualBlock> blocks) {
  Int16Grids g;
  if (!blocks.empty()) {
    g.width = blocks.front().width;
    g.height = blocks.front().height;
  }
  for (const ResidualBlock& b : blocks) g.grids.push_back(b.samples);
  return g;
}

Int16Grids to_grids(std::span<const CoefficientBlock> blocks) {
  Int16Grids g;
  if (!blocks.empty()) {
    g.width = blocks.front().width;
    g.height = blocks.front().height;
  }
  for (const CoefficientBlock& b : blocks) {
    std::vector<std::int16_t> grid;
    grid.reserve(b.levels.size());
    for (std::int32_t v : b.levels) {
      if (v < std::numeric_limits<std::int16_t>::min() || v > std::numeric_limits<std::int16_t>::max())
        throw DataError("level does not fit in int16");
      grid.push_back(static_cast<std::int16_t>(v));
    }
    g.grids.push_back(std::move(grid));
  }
  return g;
}

std::vector<ResidualBlock> to_residuals(const Int16Grids& g) {
  std::vector<ResidualBlock> out;
  for (const auto& grid : g.grids) out.push_back({g.width, g.height, grid});
  return out;
}

std::vector<CoefficientBlock> to_coefficients(const Int16Grids& g) {
  std::vector<CoefficientBlock> out;
  for (const auto& grid : g.grids) {
    CoefficientBlock b(g.width, g.height);
    std::copy(grid.begin(), grid.end(), b.levels.begin());
    out.push_back(std::move(b));
  }
  return out;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  std::size_t at = 0;
  auto token = [&]() {
    std::string t;
    while (at < bytes.size()) {
      const char c = static_cast<char>(bytes[at]);
      if (c == '#') {
        while (at < bytes.size() && bytes[at] != '\n') ++at;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (!t.empty()) break;
        ++at;
      } else {
        t.push_back(c);
        ++at;
      }
    }
    return t;
  };
  if (token() != "P5") throw DataError("not a binary PGM: " + path.string());
  GrayImage img;
  int maxval = 0;
  try {
    img.width = std::stoi(token());
    img.height = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::exception&) {
    throw DataError("malformed PGM header: " + path.string());
  }
  if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 255)
    throw DataError("unsupported PGM: " + path.string());
  ++at;  // single whitespace before the raster
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  if (bytes.size() < at + n) throw DataError("truncated PGM: " + path.string());
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(at),
                    bytes.begin() + static_cast<std::ptrdiff_t>(at + n));
  return img;
}

void write_pgm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> pixels, int maxval) {
  const std::string header =
      "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n" + std::to_string(maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  write_file(path, out);
}

std::vector<std::uint8_t> encode_nrec(const NrecStream& s) {
  std::vector<std::uint8_t> out(kNrecMagic, kNrecMagic + 4);
  out.push_back(kNrecVersion);
  out.push_back(static_cast<std::uint8_t>(s.shape_id));
  out.push_back(static_cast<std::uint8_t>((s.adaptive ? 1 : 0) | (s.zero_flag ? 2 : 0)));
  out.push_back(static_cast<std::uint8_t>(s.width));
  out.push_back(static_cast<std::uint8_t>(s.height));
  put_u32(out, s.block_count);
  out.insert(out.end(), s.payload.begin(), s.payload.end());
  return out;
}

NrecStream decode_nrec(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 13 || !std::equal(kNrecMagic, kNrecMagic + 4, bytes.begin()))
    throw DataError("not an NREC stream");
  if (bytes[4] != kNrecVersion) throw DataError("unsupported NREC version");
  NrecStream s;
  s.shape_id = bytes[5];
  s.adaptive = (bytes[6] & 1) != 0;
  s.zero_flag = (bytes[6] & 2) != 0;
  s.width = bytes[7];
  s.height = bytes[8];
  s.block_count = get_u32(bytes, 9);
  s.payload.assign(bytes.begin() + 13, bytes.end());
  return s;
}

std::string model_to_json(const ModelDocument& doc) {
  const Scheme& sc = doc.scheme;
  json j;
  j["format"] = "nrecm/1";
  j["shape_id"] = doc.shape_id;
  j["scheme"] = std::string(to_string(sc.kind()));
  j["width"] = sc.width();
  j["height"] = sc.height();
  j["smoothing"] = doc.model.smoothing() == Smoothing::kKt ? "kt" : "none";
  j["params"] = {{"n_nbd", doc.params.n_nbd}, {"th_c", doc.params.th_c}, {"delta", doc.params.delta}};
  j["model_of"] = sc.model_map();
  j["tree_of"] = sc.tree_map();
  json trees = json::array();
  for (std::size_t t = 0; t < sc.trees().size(); ++t) {
    const ContextTree& tree = sc.trees()[t];
    json leaves = json::array();
    for (const Leaf& l : tree.leaves()) {
      json lj = {{"kind", leaf_kind(l.kind)}};
      if (l.kind != Leaf::Kind::kAllZero) {
        lj["c2"] = l.c2;
        lj["lo"] = l.c3_lo;
        lj["hi"] = l.c3_hi;
      }
      leaves.push_back(lj);
    }
    trees.push_back({{"group", t},
                     {"nc", offsets_json(tree.nc())},
                     {"no", offsets_json(tree.no())},
                     {"merged", tree.merged()},
                     {"leaves", leaves},
                     {"counts", counts_json(doc.model.counts().model(static_cast<int>(t)))}});
  }
  j["trees"] = trees;
  json tables = json::array();
  for (int m = static_cast<int>(sc.trees().size()); m < doc.model.counts().model_count(); ++m)
    tables.push_back({{"model", m}, {"counts", counts_json(doc.model.counts().model(m))}});
  j["tables"] = tables;
  return j.dump(1) + "\n";
}

ModelDocument model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "nrecm/1") throw DataError("unknown model format");
    ModelDocument doc;
    doc.shape_id = j.at("shape_id").get<int>();
    doc.params.n_nbd = j.at("params").at("n_nbd").get<int>();
    doc.params.th_c = j.at("params").at("th_c").get<double>();
    doc.params.delta = j.at("params").at("delta").get<double>();
    const auto kind = parse_scheme(j.at("scheme").get<std::string>());
    if (!kind) throw DataError("unknown scheme in model");
    std::vector<ContextTree> trees;
    std::vector<std::vector<BrCounts>> tables;
    for (const json& t : j.at("trees")) {
      ContextTree tree(offsets_from(t.at("nc")), offsets_from(t.at("no")));
      if (t.at("merged").get<bool>()) {
        const int nodes = tree.nc_size() < 3 ? tree.nc_size() + 1 : tree.nc_size();
        std::vector<std::vector<int>> groups(nodes);
        for (const json& l : t.at("leaves"))
          if (l.at("kind") == "range") groups.at(l.at("c2").get<int>()).push_back(l.at("hi").get<int>());
        tree = tree.with_c3_intervals(groups);
      }
      if (static_cast<int>(t.at("leaves").size()) != tree.leaf_count())
        throw DataError("tree leaves do not match the stored layout");
      tables.push_back(counts_from(t.at("counts")));
      trees.push_back(std::move(tree));
    }
    for (const json& t : j.at("tables")) {
      const auto m = t.at("model").get<std::size_t>();
      if (tables.size() <= m) tables.resize(m + 1);
      tables[m] = counts_from(t.at("counts"));
    }
    doc.scheme = Scheme(*kind, j.at("width").get<int>(), j.at("height").get<int>(),
                        j.at("model_of").get<std::vector<int>>(), j.at("tree_of").get<std::vector<int>>(),
                        std::move(trees));
    if (static_cast<int>(tables.size()) != doc.scheme.model_count())
      throw DataError("model tables do not match the scheme");
    for (int m = 0; m < doc.scheme.model_count(); ++m)
      if (static_cast<int>(tables[m].size()) != doc.scheme.context_count(m))
        throw DataError("model table size does not match the scheme");
    const Smoothing sm = j.at("smoothing").get<std::string>() == "kt" ? Smoothing::kKt : Smoothing::kNone;
    doc.model = ProbabilityModel::train(CountTable(std::move(tables)), sm);
    return doc;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("inconsistent model document: ") + e.what());
  }
}

std::vector<std::uint8_t> diverging_pixels(std::span<const double> values, double limit) {
  std::vector<std::uint8_t> px;
  px.reserve(values.size());
  for (double v : values) {
    const double t = limit > 0.0 ? std::clamp(v / limit, -1.0, 1.0) : 0.0;
    px.push_back(static_cast<std::uint8_t>(std::lround(127.5 + 127.5 * t)));
  }
  return px;
}

std::string heatmap_svg(int width, int height, std::span<const double> values, double limit) {
  constexpr int kCell = 16;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width * kCell << "\" height=\""
    << height * kCell << "\">\n";
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double v = values[static_cast<std::size_t>(y) * width + x];
      const double t = limit > 0.0 ? std::clamp(v / limit, -1.0, 1.0) : 0.0;
      // Blue for losses, red for gains, white at zero.
      const int r = t >= 0 ? 255 : static_cast<int>(std::lround(255 * (1 + t)));
      const int b = t <= 0 ? 255 : static_cast<int>(std::lround(255 * (1 - t)));
      const int g = static_cast<int>(std::lround(255 * (1 - std::abs(t))));
      char color[8];
      std::snprintf(color, sizeof color, "#%02x%02x%02x", r, g, b);
      s << "<rect x=\"" << x * kCell << "\" y=\"" << y * kCell << "\" width=\"" << kCell
        << "\" height=\"" << kCell << "\" fill=\"" << color << "\"><title>" << v
        << "</title></rect>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace nrec
