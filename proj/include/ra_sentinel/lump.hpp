// Copyright 2026, ra_sentinel contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * \file lump.hpp
 * \brief Percentile-gated range-azimuth lump detector.
 *
 * Steps, in order: nearest-rank percentile gate (inclusive), binary closing
 * with a small square element, removal of components below A_min, two-pass
 * connected-component labeling, and selection of the largest component
 * together with its tight bounding box. Every stage is linear in H*W.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ra_sentinel/error.hpp"
#include "ra_sentinel/types.hpp"

namespace ra_sentinel {

enum class Connectivity : int { four = 4, eight = 8 };

inline Connectivity parse_connectivity(int n) {
  if (n == 4) return Connectivity::four;
  if (n == 8) return Connectivity::eight;
  throw DomainError("connectivity must be 4 or 8");
}

struct LumpParams {
  double percentile = 99.0;
  std::size_t min_area = 12;
  std::size_t closing_se = 2;
  Connectivity connectivity = Connectivity::eight;

  void validate() const {
    if (!(percentile > 0.0 && percentile < 100.0))
      throw DomainError("percentile must lie in (0, 100)");
    if (min_area < 1) throw DomainError("min_area must be >= 1");
    if (closing_se < 1) throw DomainError("closing_se must be >= 1");
  }
};

/// Nearest-rank percentile: the value at ascending index ceil(p/100 * n) - 1,
/// located with an average-linear selection rather than a full sort.
inline double percentile_threshold(const RAImage& x, double p) {
  if (x.empty()) throw DimensionError("percentile of empty image");
  if (!(p > 0.0 && p < 100.0)) throw DomainError("percentile must lie in (0, 100)");
  std::vector<double> vals(x.values().begin(), x.values().end());
  const double n = static_cast<double>(vals.size());
  auto rank = static_cast<std::ptrdiff_t>(std::ceil(p * n / 100.0)) - 1;
  rank = std::clamp<std::ptrdiff_t>(rank, 0, static_cast<std::ptrdiff_t>(vals.size()) - 1);
  std::nth_element(vals.begin(), vals.begin() + rank, vals.end());
  return vals[static_cast<std::size_t>(rank)];
}

inline BinaryMask gate_mask(const RAImage& x, double tau) {
  BinaryMask m(x.rows(), x.cols());
  const auto src = x.values();
  auto dst = m.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= tau ? 1 : 0;
  return m;
}

/// Dilation then erosion by an se x se square anchored at its top-left cell:
/// dilation ORs M(i-a, j-b) and erosion ANDs D(i+a, j+b) for a, b in
/// [0, se). The mask is treated as zero-padded, and the dilation is evaluated
/// on a domain extended by se-1 rows and columns so the erosion near the
/// bottom and right edges sees the true dilated set. The result is cropped
/// back to the input shape.
inline BinaryMask binary_closing(const BinaryMask& m, std::size_t se) {
  if (se < 1) throw DomainError("structuring element size must be >= 1");
  if (se == 1) return m;
  const std::size_t rows = m.rows(), cols = m.cols();
  const std::size_t ext_rows = rows + se - 1, ext_cols = cols + se - 1;
  BinaryMask dil(ext_rows, ext_cols);
  for (std::size_t i = 0; i < ext_rows; ++i) {
    for (std::size_t j = 0; j < ext_cols; ++j) {
      std::uint8_t v = 0;
      for (std::size_t a = 0; a < se && a <= i && !v; ++a) {
        if (i - a >= rows) continue;
        for (std::size_t b = 0; b < se && b <= j; ++b)
          if (j - b < cols && m(i - a, j - b)) {
            v = 1;
            break;
          }
      }
      dil(i, j) = v;
    }
  }
  BinaryMask out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::uint8_t v = 1;
      for (std::size_t a = 0; a < se && v; ++a)
        for (std::size_t b = 0; b < se; ++b)
          if (!dil(i + a, j + b)) {
            v = 0;
            break;
          }
      out(i, j) = v;
    }
  }
  return out;
}

struct ComponentLabels {
  Grid<std::uint32_t> labels;  // 0 = background, 1..count
  std::size_t count = 0;
  std::vector<std::size_t> areas;  // areas[label - 1]

  std::size_t area(std::uint32_t label) const { return areas.at(label - 1); }
};

namespace detail {

class DisjointSet {
 public:
  std::uint32_t make() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace detail

/// Two-pass labeling with union-find merging. Final labels are compacted to
/// 1..count in raster order of each component's first pixel.
inline ComponentLabels connected_components(const BinaryMask& m,
                                            Connectivity conn) {
  const std::size_t rows = m.rows(), cols = m.cols();
  constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  Grid<std::uint32_t> provisional(rows, cols, kNone);
  detail::DisjointSet sets;

  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (!m(i, j)) continue;
      std::uint32_t neighbors[4];
      std::size_t count = 0;
      auto take = [&](std::size_t r, std::size_t c) {
        const std::uint32_t l = provisional(r, c);
        if (l != kNone) neighbors[count++] = l;
      };
      if (j > 0) take(i, j - 1);
      if (i > 0) {
        take(i - 1, j);
        if (conn == Connectivity::eight) {
          if (j > 0) take(i - 1, j - 1);
          if (j + 1 < cols) take(i - 1, j + 1);
        }
      }
      if (count == 0) {
        provisional(i, j) = sets.make();
        continue;
      }
      std::uint32_t best = neighbors[0];
      for (std::size_t k = 1; k < count; ++k) best = std::min(best, neighbors[k]);
      provisional(i, j) = best;
      for (std::size_t k = 0; k < count; ++k) sets.unite(best, neighbors[k]);
    }
  }

  ComponentLabels out{Grid<std::uint32_t>(rows, cols, 0), 0, {}};
  std::vector<std::uint32_t> compact(sets.size(), 0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::uint32_t l = provisional(i, j);
      if (l == kNone) continue;
      const std::uint32_t root = sets.find(l);
      if (compact[root] == 0) {
        compact[root] = static_cast<std::uint32_t>(++out.count);
        out.areas.push_back(0);
      }
      out.labels(i, j) = compact[root];
      ++out.areas[compact[root] - 1];
    }
  }
  return out;
}

/// Clears every component whose area is below `min_area`.
inline BinaryMask remove_small(const BinaryMask& m, std::size_t min_area,
                               Connectivity conn) {
  if (min_area < 1) throw DomainError("min_area must be >= 1");
  const ComponentLabels cc = connected_components(m, conn);
  BinaryMask out(m.rows(), m.cols());
  const auto lab = cc.labels.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < lab.size(); ++i)
    dst[i] = lab[i] != 0 && cc.areas[lab[i] - 1] >= min_area ? 1 : 0;
  return out;
}

/// Runs the full gate -> close -> prune -> label -> dominant-lump sequence.
inline Detection detect_lump(const RAImage& x, const LumpParams& params) {
  params.validate();
  if (x.empty()) throw DimensionError("lump detector on empty image");
  Detection det{BinaryMask(x.rows(), x.cols()), std::nullopt};
  const auto vals = x.values();
  if (std::all_of(vals.begin(), vals.end(), [](double v) { return v == 0.0; }))
    return det;

  const double tau = percentile_threshold(x, params.percentile);
  BinaryMask m = gate_mask(x, tau);
  m = binary_closing(m, params.closing_se);
  m = remove_small(m, params.min_area, params.connectivity);
  const ComponentLabels cc = connected_components(m, params.connectivity);
  if (cc.count == 0) return det;

  // Ties resolve to the smallest label, i.e. earliest in raster order.
  const auto largest = std::max_element(cc.areas.begin(), cc.areas.end());
  const auto keep = static_cast<std::uint32_t>(largest - cc.areas.begin() + 1);
  const auto lab = cc.labels.values();
  auto dst = det.mask.values();
  for (std::size_t i = 0; i < lab.size(); ++i) dst[i] = lab[i] == keep ? 1 : 0;
  det.bbox = tight_bbox(det.mask);
  return det;
}

}  // namespace ra_sentinel
