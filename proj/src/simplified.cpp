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

#include "nrec/simplified.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "nrec/baseline.hpp"
#include "nrec/scan.hpp"

namespace nrec {

namespace {

std::vector<Offset> most_common(const std::map<std::vector<Offset>, int>& counts) {
  std::vector<Offset> best;
  int best_n = 0;
  for (const auto& [pattern, n] : counts) {
    if (n > best_n) {
      best = pattern;
      best_n = n;
    }
  }
  return best;
}

}  // namespace

bool cts_eligible(const CanonicalShape& shape) {
  const int t = type_number(shape.type);
  const BlockSize b = shape.sorted_box();
  return t <= 3 && (b.width == b.height || 2 * b.width == b.height);
}

std::vector<int> cts_shape_ids(const ShapeInventory& inventory) {
  std::vector<int> ids;
  for (const CanonicalShape& s : inventory.shapes)
    if (cts_eligible(s)) ids.push_back(s.id);
  return ids;
}

std::vector<Offset> full_neighborhood(int n_nbd) {
  std::vector<Offset> out;
  for (int d = 1; d <= n_nbd; ++d)
    for (int dv = 0; dv <= d; ++dv) out.push_back({d - dv, dv});
  return out;
}

SimplifiedScheme build_cts(const CanonicalShape& shape, const PartitionedDictionary& dict,
                           int n_nbd, double th_c, std::uint64_t training_blocks,
                           std::uint64_t min_group_symbols) {
  if (!cts_eligible(shape)) throw std::invalid_argument("shape is outside the simplified set");
  const int w = dict.width();
  const int h = dict.height();
  const int n = w * h;
  SimplifiedScheme s;
  s.shape_id = shape.id;
  s.n_nbd = n_nbd;
  s.th_c = th_c;

  const std::vector<NeighborhoodPartition> parts = split_all(dict, n_nbd, th_c);
  std::map<std::vector<Offset>, int> pairs, triples;
  for (const NeighborhoodPartition& p : parts) {
    std::vector<Offset> nc = p.nc;
    std::sort(nc.begin(), nc.end());
    if (nc.size() == 2) ++pairs[nc];
    if (nc.size() == 3) ++triples[nc];
  }
  s.templates[kTemplatePair] = most_common(pairs);
  s.templates[kTemplateTriple] = most_common(triples);
  const bool have_pair = !s.templates[kTemplatePair].empty();
  const bool have_triple = !s.templates[kTemplateTriple].empty();

  s.template_of.resize(n);
  for (int p = 0; p < n; ++p) {
    const auto size = parts[p].nc.size();
    int t = kTemplateEmpty;
    if (size >= 3) {
      t = have_triple ? kTemplateTriple : have_pair ? kTemplatePair : kTemplateEmpty;
    } else if (size >= 1) {
      t = have_pair ? kTemplatePair : have_triple ? kTemplateTriple : kTemplateEmpty;
    }
    s.template_of[p] = t;
  }

  // Raw key = template * classes + region class.
  auto key_of = [](int t, int cls) { return t * kRegionClasses + cls; };
  std::vector<int> key(n);
  std::map<int, std::uint64_t> support;
  for (int p = 0; p < n; ++p) {
    const Freq f = dict.freq(p);
    key[p] = key_of(s.template_of[p], region_class({f.u, f.v}));
    support[key[p]] += training_blocks;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [k, sym] : support) {
      if (sym >= min_group_symbols) continue;
      const int t = k / kRegionClasses;
      const int cls = k % kRegionClasses;
      int target = -1;
      int best_dist = kRegionClasses + 1;
      for (const auto& [k2, sym2] : support) {
        if (k2 == k || k2 / kRegionClasses != t) continue;
        const int dist = std::abs(k2 % kRegionClasses - cls);
        if (dist < best_dist) {
          best_dist = dist;
          target = k2;
        }
      }
      if (target < 0) continue;
      for (int& kp : key)
        if (kp == k) kp = target;
      support[target] += sym;
      support.erase(k);
      changed = true;
      break;
    }
  }

  // Number groups in scan order.
  const ScanOrder scan = zigzag(w, h);
  std::map<int, int> group_id;
  s.group_of.assign(n, -1);
  for (const Pos& q : scan.order) {
    const int p = q.y * w + q.x;
    auto [it, inserted] = group_id.try_emplace(key[p], static_cast<int>(group_id.size()));
    if (inserted) {
      s.group_template.push_back(it->first / kRegionClasses);
      s.group_class.push_back(it->first % kRegionClasses);
    }
    s.group_of[p] = it->second;
  }

  const std::vector<Offset> nt = full_neighborhood(n_nbd);
  std::vector<ContextTree> trees;
  for (int g = 0; g < s.group_count(); ++g) {
    const std::vector<Offset>& nc = s.templates[s.group_template[g]];
    std::vector<Offset> no;
    for (const Offset& o : nt)
      if (std::find(nc.begin(), nc.end(), o) == nc.end()) no.push_back(o);
    trees.emplace_back(nc, no);
  }
  s.scheme = Scheme(SchemeKind::kCts, w, h, s.group_of, s.group_of, std::move(trees));
  return s;
}

}  // namespace nrec
