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
 * \file beamform.hpp
 * \brief Two-element Capon (MVDR) range-azimuth imaging.
 *
 * For every range bin a 2x2 spatial covariance is averaged over all Doppler
 * bins of the selected receive pair, diagonally loaded, and the spectrum
 * P(theta) = 1 / (a^H R^-1 a) is evaluated on a grid uniform in sin(theta).
 */
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "ra_sentinel/error.hpp"
#include "ra_sentinel/rd_pipeline.hpp"
#include "ra_sentinel/types.hpp"

namespace ra_sentinel {

inline constexpr double kCovarianceLoading = 1e-4;
inline constexpr double kCovarianceLoadingFloor = 1e-12;

/// Hermitian 2x2 covariance [[r00, r01], [conj(r01), r11]], loading included
/// in r00 and r11.
struct SpatialCovariance {
  double r00 = 0.0;
  double r11 = 0.0;
  cdouble r01{};
  double loading = 0.0;

  double determinant() const { return r00 * r11 - std::norm(r01); }
  /// Trace before diagonal loading was added.
  double signal_trace() const { return r00 + r11 - 2.0 * loading; }
};

using SteeringVector = std::array<cdouble, 2>;

struct SteeringTable {
  std::vector<double> angles_deg;
  std::vector<double> sines;
  std::vector<SteeringVector> vectors;

  std::size_t size() const { return angles_deg.size(); }
};

/// a(theta) = [1, exp(-i 2 pi d sin(theta))], d in wavelengths.
inline SteeringVector steering_vector(double sin_theta, double spacing) {
  return {cdouble(1.0, 0.0),
          std::polar(1.0, -2.0 * std::numbers::pi * spacing * sin_theta)};
}

inline SteeringTable build_steering_table(const RadarConfig& config) {
  const std::size_t w = config.num_azimuth_bins;
  if (w < 2) throw DomainError("steering table needs at least 2 azimuth bins");
  if (!(config.azimuth_fov_deg > 0.0 && config.azimuth_fov_deg <= 90.0))
    throw DomainError("azimuth_fov must lie in (0, 90] degrees");
  const double s_max =
      std::sin(config.azimuth_fov_deg * std::numbers::pi / 180.0);
  SteeringTable table;
  table.angles_deg.resize(w);
  table.sines.resize(w);
  table.vectors.resize(w);
  for (std::size_t i = 0; i < w; ++i) {
    const double s =
        -s_max + 2.0 * s_max * static_cast<double>(i) / static_cast<double>(w - 1);
    table.sines[i] = s;
    table.angles_deg[i] = std::asin(s) * 180.0 / std::numbers::pi;
    table.vectors[i] = steering_vector(s, config.antenna_spacing);
  }
  return table;
}

/// Nearest grid column to an arbitrary azimuth, measured in sin-space.
inline std::size_t nearest_azimuth_bin(const SteeringTable& table,
                                       double angle_deg) {
  const double s = std::sin(angle_deg * std::numbers::pi / 180.0);
  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i)
    if (std::abs(table.sines[i] - s) < std::abs(table.sines[best] - s))
      best = i;
  return best;
}

inline SpatialCovariance loaded_covariance(double r00, double r11, cdouble r01) {
  const double load =
      std::max(kCovarianceLoading * (r00 + r11) / 2.0, kCovarianceLoadingFloor);
  return {r00 + load, r11 + load, r01, load};
}

/// R = (1/D) sum_d x_d x_d^H over all Doppler bins, plus diagonal loading.
inline SpatialCovariance estimate_covariance(
    const RangeDopplerMap& rd, std::size_t range_bin,
    std::pair<std::size_t, std::size_t> rx_pair) {
  if (range_bin >= rd.num_range())
    throw DimensionError("range bin outside range-Doppler map");
  if (rx_pair.first >= rd.num_rx() || rx_pair.second >= rd.num_rx())
    throw DimensionError("rx_pair outside range-Doppler map");
  double r00 = 0.0, r11 = 0.0;
  cdouble r01{};
  const std::size_t d_count = rd.num_doppler();
  for (std::size_t d = 0; d < d_count; ++d) {
    const cdouble x0 = rd.at(rx_pair.first, d, range_bin);
    const cdouble x1 = rd.at(rx_pair.second, d, range_bin);
    r00 += std::norm(x0);
    r11 += std::norm(x1);
    r01 += x0 * std::conj(x1);
  }
  const double inv = 1.0 / static_cast<double>(d_count);
  return loaded_covariance(r00 * inv, r11 * inv, r01 * inv);
}

/// 1 / (a^H R^-1 a) through the closed-form 2x2 inverse:
/// a^H R^-1 a = (|a1|^2 r00 + |a0|^2 r11 - 2 Re(conj(a0) r01 a1)) / det.
inline double capon_power(const SpatialCovariance& R, const SteeringVector& a) {
  const double det = R.determinant();
  const double quad = std::norm(a[1]) * R.r00 + std::norm(a[0]) * R.r11 -
                      2.0 * std::real(std::conj(a[0]) * R.r01 * a[1]);
  const double p = det / quad;
  if (!std::isfinite(p) || !(p > 0.0))
    throw NumericalError("Capon power is not finite and positive");
  return p;
}

/// Capon spectrum per (range, azimuth), max-normalized. Range bins that carry
/// no energy at all contribute zero instead of the loading floor, so an
/// all-zero map yields an all-zero image.
inline RAImage build_ra_image(const RangeDopplerMap& rd,
                              const SteeringTable& table,
                              const RadarConfig& config) {
  if (table.size() != config.num_azimuth_bins)
    throw DimensionError("steering table size differs from config");
  if (rd.num_range() != config.num_samples || rd.num_rx() != config.num_rx)
    throw DimensionError("range-Doppler map dims differ from config");
  RAImage img(rd.num_range(), table.size());
  for (std::size_t h = 0; h < rd.num_range(); ++h) {
    const SpatialCovariance R = estimate_covariance(rd, h, config.rx_pair);
    if (!(R.signal_trace() > 0.0)) continue;
    auto row = img.row(h);
    for (std::size_t w = 0; w < table.size(); ++w)
      row[w] = capon_power(R, table.vectors[w]);
  }
  normalize_by_max(img);
  return img;
}

}  // namespace ra_sentinel
