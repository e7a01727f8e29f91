// Copyright 2026 The asr-dcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "asr/roi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "asr/error.hpp"

namespace asr {

namespace {

struct UnionFind {
  std::vector<std::int32_t> parent;
  std::vector<std::uint32_t> size;

  explicit UnionFind(std::size_t n) : parent(n, -1), size(n, 0) {}

  void Make(std::int32_t i) {
    parent[i] = i;
    size[i] = 1;
  }
  bool Active(std::int32_t i) const { return parent[i] >= 0; }
  std::int32_t Find(std::int32_t i) {
    std::int32_t r = i;
    while (parent[r] != r) r = parent[r];
    while (parent[i] != r) {
      const std::int32_t next = parent[i];
      parent[i] = r;
      i = next;
    }
    return r;
  }
  // Returns the new root.
  std::int32_t Union(std::int32_t a, std::int32_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return a;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return a;
  }
};

int NeighbourOffsets(int connectivity, int (*offsets)[2]) {
  static const int k4[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  static const int k8[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                               {0, 1},   {1, -1}, {1, 0},  {1, 1}};
  Require(connectivity == 4 || connectivity == 8, "connectivity must be 4 or 8");
  const int n = connectivity;
  for (int i = 0; i < n; ++i) {
    offsets[i][0] = connectivity == 4 ? k4[i][0] : k8[i][0];
    offsets[i][1] = connectivity == 4 ? k4[i][1] : k8[i][1];
  }
  return n;
}

// Component-tree node: the connected component of pixels >= level.
struct TreeNode {
  std::int32_t parent = -1;
  std::uint32_t area = 0;
  std::uint8_t level = 0;
};

}  // namespace

MaskMatrix Region::LocalMask() const {
  MaskMatrix m(n_bins(), n_frames(), 0);
  for (const Pixel& p : pixels) m(p.bin - bin_min, p.frame - frame_min) = 1;
  return m;
}

Region MakeRegion(std::vector<Pixel> pixels, const Spectrogram& spec) {
  Require(!pixels.empty(), "region must contain at least one pixel");
  std::sort(pixels.begin(), pixels.end());
  pixels.erase(std::unique(pixels.begin(), pixels.end()), pixels.end());
  Region r;
  r.frame_min = r.frame_max = pixels[0].frame;
  r.bin_min = r.bin_max = pixels[0].bin;
  double sum = 0.0;
  for (const Pixel& p : pixels) {
    r.frame_min = std::min(r.frame_min, p.frame);
    r.frame_max = std::max(r.frame_max, p.frame);
    r.bin_min = std::min(r.bin_min, p.bin);
    r.bin_max = std::max(r.bin_max, p.bin);
    sum += spec.power(p.frame, p.bin);
  }
  r.area_px = pixels.size();
  r.mean_intensity = sum / static_cast<double>(pixels.size());
  r.bbox.t0_s = spec.FrameSpanStart(r.frame_min);
  r.bbox.t1_s = spec.FrameSpanEnd(r.frame_max);
  r.bbox.f_lo_hz = std::max(0.0, (r.bin_min - 0.5) * spec.freq_step_hz);
  r.bbox.f_hi_hz = (r.bin_max + 0.5) * spec.freq_step_hz;
  r.pixels = std::move(pixels);
  return r;
}

void MserParams::Validate() const {
  Require(delta >= 1, "MSER delta must be at least 1");
  Require(max_area_px == 0 || min_area_px < max_area_px,
          "MSER min_area must be below max_area");
  Require(max_variation >= 0, "MSER max_variation must be nonnegative");
  Require(connectivity == 4 || connectivity == 8, "connectivity must be 4 or 8");
}

Matrix<std::uint8_t> RankQuantize(const MatrixD& values) {
  const std::size_t n = values.size();
  Matrix<std::uint8_t> out(values.rows(), values.cols(), 0);
  if (n == 0) return out;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const auto& v = values.data();
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return v[a] < v[b]; });
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && v[order[j]] == v[order[i]]) ++j;
    // rank = number of strictly smaller values
    const auto level = static_cast<std::uint8_t>((256 * static_cast<unsigned long long>(i)) / n);
    for (std::size_t k = i; k < j; ++k) out.data()[order[k]] = level;
    i = j;
  }
  return out;
}

std::vector<Region> MserDetect(const Spectrogram& spec, const MserParams& params) {
  params.Validate();
  const std::size_t frames = spec.n_frames();
  const std::size_t bins = spec.n_bins();
  const std::size_t n = frames * bins;
  if (n == 0) return {};
  Require(n < static_cast<std::size_t>(INT32_MAX), "spectrogram too large for MSER");
  const std::size_t max_area =
      params.max_area_px > 0 ? params.max_area_px : std::max<std::size_t>(1, n / 5);

  const auto grey = RankQuantize(spec.power);
  const auto& g = grey.data();

  // Bucket pixels by level, brightest first.
  std::vector<std::uint32_t> start(257, 0);
  for (std::uint8_t v : g) ++start[v + 1];
  for (int l = 0; l < 256; ++l) start[l + 1] += start[l];
  std::vector<std::uint32_t> by_level(n);
  {
    auto fill = start;
    for (std::uint32_t i = 0; i < n; ++i) by_level[fill[g[i]]++] = i;
  }

  int offsets[8][2];
  const int n_off = NeighbourOffsets(params.connectivity, offsets);

  UnionFind uf(n);
  std::vector<std::int32_t> root_node(n, -1);
  std::vector<std::int32_t> pixel_node(n, -1);
  std::vector<TreeNode> nodes;
  std::vector<std::int32_t> alias;  // level-equal nodes merged into another
  nodes.reserve(n / 4);
  auto resolve = [&](std::int32_t x) {
    while (alias[x] != x) x = alias[x];
    return x;
  };

  std::int32_t roots[8];
  for (int level = 255; level >= 0; --level) {
    for (std::uint32_t k = start[level]; k < start[level + 1]; ++k) {
      const std::int32_t p = static_cast<std::int32_t>(by_level[k]);
      const std::int32_t t = p / static_cast<std::int32_t>(bins);
      const std::int32_t b = p % static_cast<std::int32_t>(bins);
      uf.Make(p);
      int n_roots = 0;
      for (int o = 0; o < n_off; ++o) {
        const std::int32_t tt = t + offsets[o][0];
        const std::int32_t bb = b + offsets[o][1];
        if (tt < 0 || bb < 0 || tt >= static_cast<std::int32_t>(frames) ||
            bb >= static_cast<std::int32_t>(bins)) {
          continue;
        }
        const std::int32_t q = tt * static_cast<std::int32_t>(bins) + bb;
        if (!uf.Active(q) || q == p) continue;
        const std::int32_t r = uf.Find(q);
        bool dup = false;
        for (int i = 0; i < n_roots; ++i) dup |= roots[i] == r;
        if (!dup) roots[n_roots++] = r;
      }
      std::int32_t target = -1;
      for (int i = 0; i < n_roots && target < 0; ++i) {
        const std::int32_t nd = root_node[roots[i]];
        if (nodes[nd].level == level) target = nd;
      }
      if (target < 0) {
        target = static_cast<std::int32_t>(nodes.size());
        nodes.push_back({-1, 0, static_cast<std::uint8_t>(level)});
        alias.push_back(target);
      }
      std::int32_t set_root = p;
      for (int i = 0; i < n_roots; ++i) {
        const std::int32_t nd = root_node[roots[i]];
        if (nd != target) {
          if (nodes[nd].level == level) {
            alias[nd] = target;
          } else {
            nodes[nd].parent = target;
          }
          nodes[target].area += nodes[nd].area;
        }
        set_root = uf.Union(set_root, roots[i]);
      }
      nodes[target].area += 1;
      pixel_node[p] = target;
      root_node[set_root] = target;
    }
  }

  const std::int32_t n_nodes = static_cast<std::int32_t>(nodes.size());
  std::vector<char> live(n_nodes, 0);
  for (std::int32_t i = 0; i < n_nodes; ++i) {
    live[i] = alias[i] == i;
    if (nodes[i].parent >= 0) nodes[i].parent = resolve(nodes[i].parent);
  }
  for (auto& pn : pixel_node) pn = resolve(pn);

  // Area variation against the ancestor delta levels below.
  std::vector<double> variation(n_nodes, 0.0);
  for (std::int32_t i = 0; i < n_nodes; ++i) {
    if (!live[i]) continue;
    const int floor_level = static_cast<int>(nodes[i].level) - params.delta;
    std::int32_t a = i;
    while (nodes[a].parent >= 0 && nodes[nodes[a].parent].level >= floor_level) {
      a = nodes[a].parent;
    }
    variation[i] = static_cast<double>(nodes[a].area - nodes[i].area) / nodes[i].area;
  }
  // Largest child of each node (main branch).
  std::vector<std::int32_t> main_child(n_nodes, -1);
  for (std::int32_t i = 0; i < n_nodes; ++i) {
    if (!live[i] || nodes[i].parent < 0) continue;
    std::int32_t& mc = main_child[nodes[i].parent];
    if (mc < 0 || nodes[i].area > nodes[mc].area ||
        (nodes[i].area == nodes[mc].area && i < mc)) {
      mc = i;
    }
  }

  std::vector<char> is_mser(n_nodes, 0);
  for (std::int32_t i = 0; i < n_nodes; ++i) {
    if (!live[i]) continue;
    const std::uint32_t area = nodes[i].area;
    if (area < params.min_area_px || area > max_area) continue;
    if (variation[i] > params.max_variation) continue;
    const std::int32_t par = nodes[i].parent;
    if (par >= 0 && variation[i] > variation[par]) continue;
    if (main_child[i] >= 0 && variation[i] > variation[main_child[i]]) continue;
    is_mser[i] = 1;
  }
  // Nested near-duplicates: of a region and its nearest MSER ancestor that is
  // barely larger, keep the less variable one (the inner one on ties).
  std::vector<char> keep = is_mser;
  for (std::int32_t i = 0; i < n_nodes; ++i) {
    if (!is_mser[i]) continue;
    std::int32_t a = nodes[i].parent;
    while (a >= 0 && !is_mser[a]) a = nodes[a].parent;
    if (a >= 0) {
      const double diff =
          static_cast<double>(nodes[a].area - nodes[i].area) / nodes[a].area;
      if (diff < params.min_diversity) {
        if (variation[i] <= variation[a]) {
          keep[a] = 0;
        } else {
          keep[i] = 0;
        }
      }
    }
  }

  // Children and pixel lists in CSR form for subtree collection.
  std::vector<std::uint32_t> child_start(n_nodes + 1, 0), pix_start(n_nodes + 1, 0);
  for (std::int32_t i = 0; i < n_nodes; ++i) {
    if (live[i] && nodes[i].parent >= 0) ++child_start[nodes[i].parent + 1];
  }
  for (std::size_t p = 0; p < n; ++p) ++pix_start[pixel_node[p] + 1];
  for (std::int32_t i = 0; i < n_nodes; ++i) {
    child_start[i + 1] += child_start[i];
    pix_start[i + 1] += pix_start[i];
  }
  std::vector<std::int32_t> children(child_start[n_nodes]);
  std::vector<std::uint32_t> pix(n);
  {
    auto cf = child_start;
    for (std::int32_t i = 0; i < n_nodes; ++i) {
      if (live[i] && nodes[i].parent >= 0) children[cf[nodes[i].parent]++] = i;
    }
    auto pf = pix_start;
    for (std::uint32_t p = 0; p < n; ++p) pix[pf[pixel_node[p]]++] = p;
  }

  std::vector<Region> out;
  std::vector<std::int32_t> stack;
  for (std::int32_t i = 0; i < n_nodes; ++i) {
    if (!keep[i]) continue;
    std::vector<Pixel> pixels;
    pixels.reserve(nodes[i].area);
    stack.assign(1, i);
    while (!stack.empty()) {
      const std::int32_t nd = stack.back();
      stack.pop_back();
      for (std::uint32_t k = pix_start[nd]; k < pix_start[nd + 1]; ++k) {
        pixels.push_back({static_cast<std::uint32_t>(pix[k] / bins),
                          static_cast<std::uint32_t>(pix[k] % bins)});
      }
      for (std::uint32_t k = child_start[nd]; k < child_start[nd + 1]; ++k) {
        stack.push_back(children[k]);
      }
    }
    out.push_back(MakeRegion(std::move(pixels), spec));
  }
  std::sort(out.begin(), out.end(), [](const Region& a, const Region& b) {
    return std::tie(a.bbox.t0_s, a.bbox.f_lo_hz, a.area_px, a.pixels) <
           std::tie(b.bbox.t0_s, b.bbox.f_lo_hz, b.area_px, b.pixels);
  });
  return out;
}

std::vector<Region> ConnectedRegions(const BinaryMask& mask, const Spectrogram& spec,
                                     int connectivity) {
  const std::size_t frames = mask.bits.rows();
  const std::size_t bins = mask.bits.cols();
  Require(frames == spec.n_frames() && bins == spec.n_bins(),
          "mask and spectrogram dimensions differ");
  int offsets[8][2];
  const int n_off = NeighbourOffsets(connectivity, offsets);
  std::vector<char> seen(frames * bins, 0);
  std::vector<Region> out;
  std::vector<std::size_t> queue;
  for (std::size_t start = 0; start < frames * bins; ++start) {
    if (!mask.bits.data()[start] || seen[start]) continue;
    std::vector<Pixel> pixels;
    queue.assign(1, start);
    seen[start] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t p = queue[head];
      const long t = static_cast<long>(p / bins);
      const long b = static_cast<long>(p % bins);
      pixels.push_back({static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(b)});
      for (int o = 0; o < n_off; ++o) {
        const long tt = t + offsets[o][0];
        const long bb = b + offsets[o][1];
        if (tt < 0 || bb < 0 || tt >= static_cast<long>(frames) || bb >= static_cast<long>(bins)) {
          continue;
        }
        const std::size_t q = static_cast<std::size_t>(tt) * bins + static_cast<std::size_t>(bb);
        if (mask.bits.data()[q] && !seen[q]) {
          seen[q] = 1;
          queue.push_back(q);
        }
      }
    }
    out.push_back(MakeRegion(std::move(pixels), spec));
  }
  return out;
}

namespace {

bool InBounds(const Region& r, const RegionBounds& b) {
  const double d = r.bbox.duration_s();
  const double w = r.bbox.bandwidth_hz();
  return d >= b.min_duration_s && d <= b.max_duration_s && w >= b.min_bandwidth_hz &&
         w <= b.max_bandwidth_hz && r.area_px >= b.min_area_px;
}

double Gap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::max(a0, b0) - std::min(a1, b1));
}

bool RegionLess(const Region& a, const Region& b) {
  return std::tie(a.bbox.t0_s, a.bbox.f_lo_hz, a.bbox.t1_s, a.bbox.f_hi_hz, a.area_px,
                  a.pixels) < std::tie(b.bbox.t0_s, b.bbox.f_lo_hz, b.bbox.t1_s,
                                       b.bbox.f_hi_hz, b.area_px, b.pixels);
}

}  // namespace

std::vector<Region> FilterMerge(const std::vector<Region>& regions,
                                const RegionBounds& bounds, const MergeGap& gap) {
  Require(bounds.min_duration_s <= bounds.max_duration_s &&
              bounds.min_bandwidth_hz <= bounds.max_bandwidth_hz,
          "inconsistent region bounds");
  std::vector<const Region*> kept;
  for (const Region& r : regions) {
    if (InBounds(r, bounds)) kept.push_back(&r);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Region* a, const Region* b) { return RegionLess(*a, *b); });
  const std::size_t n = kept.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const BBox& a = kept[i]->bbox;
    for (std::size_t j = i + 1; j < n; ++j) {
      const BBox& b = kept[j]->bbox;
      if (b.t0_s - a.t1_s > gap.dt_s) break;
      if (Gap(a.t0_s, a.t1_s, b.t0_s, b.t1_s) <= gap.dt_s &&
          Gap(a.f_lo_hz, a.f_hi_hz, b.f_lo_hz, b.f_hi_hz) <= gap.df_hz) {
        const std::size_t ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);

  std::vector<Region> out;
  for (const auto& members : groups) {
    if (members.empty()) continue;
    if (members.size() == 1) {
      out.push_back(*kept[members[0]]);
      continue;
    }
    Region m;
    double weighted = 0.0;
    double weight = 0.0;
    m.bbox = kept[members[0]]->bbox;
    m.frame_min = kept[members[0]]->frame_min;
    m.frame_max = kept[members[0]]->frame_max;
    m.bin_min = kept[members[0]]->bin_min;
    m.bin_max = kept[members[0]]->bin_max;
    for (std::size_t idx : members) {
      const Region& r = *kept[idx];
      m.pixels.insert(m.pixels.end(), r.pixels.begin(), r.pixels.end());
      weighted += r.mean_intensity * static_cast<double>(r.area_px);
      weight += static_cast<double>(r.area_px);
      m.bbox.t0_s = std::min(m.bbox.t0_s, r.bbox.t0_s);
      m.bbox.t1_s = std::max(m.bbox.t1_s, r.bbox.t1_s);
      m.bbox.f_lo_hz = std::min(m.bbox.f_lo_hz, r.bbox.f_lo_hz);
      m.bbox.f_hi_hz = std::max(m.bbox.f_hi_hz, r.bbox.f_hi_hz);
      m.frame_min = std::min(m.frame_min, r.frame_min);
      m.frame_max = std::max(m.frame_max, r.frame_max);
      m.bin_min = std::min(m.bin_min, r.bin_min);
      m.bin_max = std::max(m.bin_max, r.bin_max);
    }
    std::sort(m.pixels.begin(), m.pixels.end());
    m.pixels.erase(std::unique(m.pixels.begin(), m.pixels.end()), m.pixels.end());
    m.area_px = m.pixels.size();
    m.mean_intensity = weighted / weight;
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), RegionLess);
  return out;
}

MatrixD ResampleWindow(const MatrixD& values, std::size_t frame_lo, std::size_t frame_hi,
                       std::size_t bin_lo, std::size_t bin_hi, std::size_t out_rows,
                       std::size_t out_cols) {
  Require(out_rows >= 1 && out_cols >= 1, "patch shape must be positive");
  Require(frame_lo <= frame_hi && frame_hi < values.rows() && bin_lo <= bin_hi &&
              bin_hi < values.cols(),
          "patch window outside the spectrogram");
  const double nf = static_cast<double>(frame_hi - frame_lo);
  const double nb = static_cast<double>(bin_hi - bin_lo);
  MatrixD out(out_rows, out_cols);
  for (std::size_t r = 0; r < out_rows; ++r) {
    const double sb = bin_lo + (out_rows > 1 ? r * nb / static_cast<double>(out_rows - 1) : nb / 2);
    const std::size_t b0 = std::min(static_cast<std::size_t>(std::floor(sb)), bin_hi);
    const std::size_t b1 = std::min(b0 + 1, bin_hi);
    const double fb = sb - static_cast<double>(b0);
    for (std::size_t c = 0; c < out_cols; ++c) {
      const double sf =
          frame_lo + (out_cols > 1 ? c * nf / static_cast<double>(out_cols - 1) : nf / 2);
      const std::size_t f0 = std::min(static_cast<std::size_t>(std::floor(sf)), frame_hi);
      const std::size_t f1 = std::min(f0 + 1, frame_hi);
      const double ff = sf - static_cast<double>(f0);
      const double v00 = values(f0, b0), v01 = values(f0, b1);
      const double v10 = values(f1, b0), v11 = values(f1, b1);
      out(r, c) = (1 - ff) * ((1 - fb) * v00 + fb * v01) + ff * ((1 - fb) * v10 + fb * v11);
    }
  }
  return out;
}

MatrixD ExtractPatch(const MatrixD& values, const Region& region, std::size_t out_rows,
                     std::size_t out_cols, double pad_frac) {
  Require(pad_frac >= 0, "patch padding must be nonnegative");
  Require(region.frame_max < values.rows() && region.bin_max < values.cols(),
          "region lies outside the spectrogram");
  auto expand = [pad_frac](std::size_t lo, std::size_t hi, std::size_t limit) {
    const long extent = static_cast<long>(hi - lo + 1);
    const long pad = std::lround(pad_frac * static_cast<double>(extent));
    long a = static_cast<long>(lo) - pad;
    long b = static_cast<long>(hi) + pad;
    a = std::max(a, 0L);
    b = std::min(b, static_cast<long>(limit) - 1);
    // Degenerate single-pixel extents widen to a 2-pixel source window.
    if (b == a) {
      if (b + 1 < static_cast<long>(limit)) ++b;
      else if (a > 0) --a;
    }
    return std::pair<std::size_t, std::size_t>(a, b);
  };
  const auto [f0, f1] = expand(region.frame_min, region.frame_max, values.rows());
  const auto [b0, b1] = expand(region.bin_min, region.bin_max, values.cols());
  return ResampleWindow(values, f0, f1, b0, b1, out_rows, out_cols);
}

}  // namespace asr
