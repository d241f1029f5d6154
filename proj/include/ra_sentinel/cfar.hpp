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
 * \file cfar.hpp
 * \brief Baseline 2-D cell-averaging and order-statistic CFAR on RA images.
 *
 * A cell is declared when X(cut)^2 > scale * sigma^2, where sigma^2 is
 * estimated from the reference ring g < chebyshev(p, cut) <= r. The ring is
 * clipped at image borders, so N (and the scale) are recomputed per cell.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "ra_sentinel/error.hpp"
#include "ra_sentinel/types.hpp"

namespace ra_sentinel {

struct CfarParams {
  std::size_t ref_band = 8;    // r
  std::size_t guard_band = 2;  // g
  double p_fa = 1e-3;
  double os_rank_fraction = 0.75;
  std::optional<double> os_scale;  // overrides the calibrated OS multiplier

  void validate() const {
    if (!(ref_band > guard_band))
      throw DomainError("ref_band must exceed guard_band");
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw DomainError("p_fa must lie in (0,1)");
    if (!(os_rank_fraction > 0.0 && os_rank_fraction <= 1.0))
      throw DomainError("os_rank_fraction must lie in (0,1]");
    if (os_scale && !(*os_scale >= 0.0 && std::isfinite(*os_scale)))
      throw DomainError("os_scale must be finite and non-negative");
  }
};

/// CA-CFAR multiplier mu = N (p_fa^(-1/N) - 1).
inline double cfar_scale_factor(std::size_t n_ref, double p_fa) {
  if (n_ref < 1) throw DomainError("reference cell count must be >= 1");
  if (!(p_fa > 0.0 && p_fa < 1.0)) throw DomainError("p_fa must lie in (0,1)");
  const double n = static_cast<double>(n_ref);
  return n * std::expm1(-std::log(p_fa) / n);
}

/// OS rank k for N reference cells: max(1, round(fraction * N)).
inline std::size_t os_rank(std::size_t n_ref, double fraction) {
  const auto k = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(n_ref)));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n_ref, 1));
}

/// Exact false-alarm probability of OS-CFAR on i.i.d. exponential powers when
/// the k-th largest of N references is scaled by alpha:
/// prod_{i<m} (N-i)/(N-i+alpha), with m = N-k+1 the ascending rank.
inline double os_false_alarm(std::size_t n_ref, std::size_t k, double alpha) {
  const std::size_t m = n_ref - k + 1;
  double log_p = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = static_cast<double>(n_ref - i);
    log_p += std::log(a / (a + alpha));
  }
  return std::exp(log_p);
}

/// Solves os_false_alarm(N, k, alpha) = p_fa for alpha by bisection.
inline double os_scale_factor(std::size_t n_ref, std::size_t k, double p_fa) {
  if (n_ref < 1 || k < 1 || k > n_ref)
    throw DomainError("OS rank must satisfy 1 <= k <= N");
  if (!(p_fa > 0.0 && p_fa < 1.0)) throw DomainError("p_fa must lie in (0,1)");
  double lo = 0.0, hi = 1.0;
  while (os_false_alarm(n_ref, k, hi) > p_fa) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (os_false_alarm(n_ref, k, mid) > p_fa ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// alpha_os at the default geometry (r=8, g=2 -> N=264, k=198, p_fa=1e-3).
/// Cross-checked by Monte Carlo in the test suite.
inline constexpr double kDefaultOsScale = 24.919199124426954;

struct Pixel {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const Pixel&) const = default;
};

/// Reference ring around `cut`, clipped to the image.
inline std::vector<Pixel> reference_cells(std::size_t rows, std::size_t cols,
                                          Pixel cut, const CfarParams& params) {
  if (cut.row >= rows || cut.col >= cols)
    throw DimensionError("cell under test outside image");
  const auto r = static_cast<std::ptrdiff_t>(params.ref_band);
  const auto g = static_cast<std::ptrdiff_t>(params.guard_band);
  std::vector<Pixel> cells;
  for (std::ptrdiff_t dr = -r; dr <= r; ++dr) {
    for (std::ptrdiff_t dc = -r; dc <= r; ++dc) {
      if (std::max(std::abs(dr), std::abs(dc)) <= g) continue;
      const auto rr = static_cast<std::ptrdiff_t>(cut.row) + dr;
      const auto cc = static_cast<std::ptrdiff_t>(cut.col) + dc;
      if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(rows) ||
          cc >= static_cast<std::ptrdiff_t>(cols))
        continue;
      cells.push_back({static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)});
    }
  }
  return cells;
}

namespace detail {

struct Span1d {
  std::size_t lo, hi;  // inclusive
};

inline Span1d clip_span(std::size_t center, std::size_t half, std::size_t n) {
  return {center >= half ? center - half : 0, std::min(center + half, n - 1)};
}

inline Grid<double> power_image(const RAImage& x) {
  Grid<double> p(x.rows(), x.cols());
  const auto src = x.values();
  auto dst = p.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * src[i];
  return p;
}

/// Lazily filled per-N cache of scale factors.
template <typename Fn>
class ScaleCache {
 public:
  ScaleCache(std::size_t max_n, Fn fn)
      : table_(max_n + 1, std::numeric_limits<double>::quiet_NaN()),
        fn_(std::move(fn)) {}
  double operator()(std::size_t n) {
    double& v = table_[n];
    if (std::isnan(v)) v = fn_(n);
    return v;
  }

 private:
  std::vector<double> table_;
  Fn fn_;
};

/// os_scale_factor memoized per (N, k, p_fa) for the life of the process.
/// Border cells produce many distinct N, and solving each on every call
/// would dominate small images.
inline double cached_os_scale(std::size_t n_ref, std::size_t k, double p_fa) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, std::size_t, double>, double> table;
  const auto key = std::make_tuple(n_ref, k, p_fa);
  {
    const std::lock_guard lock(mu);
    if (const auto it = table.find(key); it != table.end()) return it->second;
  }
  const double alpha = os_scale_factor(n_ref, k, p_fa);
  const std::lock_guard lock(mu);
  table.emplace(key, alpha);
  return alpha;
}

}  // namespace detail

/// Cell-averaging CFAR. Deliberately a direct sum over the K x K window per
/// cell: O(H W K^2).
inline BinaryMask ca_cfar_2d(const RAImage& x, const CfarParams& params) {
  params.validate();
  if (x.empty()) throw DimensionError("CA-CFAR on empty image");
  const std::size_t rows = x.rows(), cols = x.cols();
  const Grid<double> power = detail::power_image(x);
  const std::size_t outer = 2 * params.ref_band + 1;
  detail::ScaleCache mu(outer * outer, [&](std::size_t n) {
    return cfar_scale_factor(n, params.p_fa);
  });

  BinaryMask mask(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto wr = detail::clip_span(i, params.ref_band, rows);
    const auto gr = detail::clip_span(i, params.guard_band, rows);
    for (std::size_t j = 0; j < cols; ++j) {
      const auto wc = detail::clip_span(j, params.ref_band, cols);
      const auto gc = detail::clip_span(j, params.guard_band, cols);
      double noise = 0.0;
      for (std::size_t rr = wr.lo; rr <= wr.hi; ++rr) {
        const auto row = power.row(rr);
        if (rr < gr.lo || rr > gr.hi) {
          for (std::size_t cc = wc.lo; cc <= wc.hi; ++cc) noise += row[cc];
        } else {
          for (std::size_t cc = wc.lo; cc < gc.lo; ++cc) noise += row[cc];
          for (std::size_t cc = gc.hi + 1; cc <= wc.hi; ++cc) noise += row[cc];
        }
      }
      const std::size_t n = (wr.hi - wr.lo + 1) * (wc.hi - wc.lo + 1) -
                            (gr.hi - gr.lo + 1) * (gc.hi - gc.lo + 1);
      if (n == 0) continue;
      noise /= static_cast<double>(n);
      mask(i, j) = power(i, j) > mu(n) * noise ? 1 : 0;
    }
  }
  return mask;
}

/// Order-statistic CFAR: sigma^2 is the k-th largest reference power.
inline BinaryMask os_cfar_2d(const RAImage& x, const CfarParams& params) {
  params.validate();
  if (x.empty()) throw DimensionError("OS-CFAR on empty image");
  const std::size_t rows = x.rows(), cols = x.cols();
  const Grid<double> power = detail::power_image(x);
  const std::size_t outer = 2 * params.ref_band + 1;
  detail::ScaleCache alpha(outer * outer, [&](std::size_t n) {
    if (params.os_scale) return *params.os_scale;
    return detail::cached_os_scale(n, os_rank(n, params.os_rank_fraction), params.p_fa);
  });

  BinaryMask mask(rows, cols);
  std::vector<double> refs;
  refs.reserve(outer * outer);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto wr = detail::clip_span(i, params.ref_band, rows);
    for (std::size_t j = 0; j < cols; ++j) {
      const auto wc = detail::clip_span(j, params.ref_band, cols);
      refs.clear();
      for (std::size_t rr = wr.lo; rr <= wr.hi; ++rr) {
        const auto row = power.row(rr);
        const std::size_t dr = rr > i ? rr - i : i - rr;
        if (dr > params.guard_band) {
          refs.insert(refs.end(), row.begin() + static_cast<std::ptrdiff_t>(wc.lo),
                      row.begin() + static_cast<std::ptrdiff_t>(wc.hi + 1));
          continue;
        }
        for (std::size_t cc = wc.lo; cc <= wc.hi; ++cc) {
          const std::size_t dc = cc > j ? cc - j : j - cc;
          if (dc > params.guard_band) refs.push_back(row[cc]);
        }
      }
      const std::size_t n = refs.size();
      if (n == 0) continue;
      const std::size_t k = os_rank(n, params.os_rank_fraction);
      auto nth = refs.begin() + static_cast<std::ptrdiff_t>(n - k);
      std::nth_element(refs.begin(), nth, refs.end());
      mask(i, j) = power(i, j) > alpha(n) * *nth ? 1 : 0;
    }
  }
  return mask;
}

}  // namespace ra_sentinel
