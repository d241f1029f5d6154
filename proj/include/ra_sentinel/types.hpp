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
 * \file types.hpp
 * \brief Domain types shared by every stage: radar configuration, IQ frame
 *        cubes, 2-D grids (RA images and binary masks), boxes and detections.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ra_sentinel/error.hpp"

namespace ra_sentinel {

using cfloat = std::complex<float>;
using cdouble = std::complex<double>;

/// Sensor geometry and beamforming grid. Defaults describe a 1TX/3RX 60 GHz
/// module streaming 128 chirps of 64 complex samples at 10 Hz.
struct RadarConfig {
  std::size_t num_rx = 3;
  std::size_t num_chirps = 128;
  std::size_t num_samples = 64;
  double frame_rate = 10.0;
  std::pair<std::size_t, std::size_t> rx_pair{0, 2};
  double antenna_spacing = 0.5;  // wavelengths
  std::size_t num_azimuth_bins = 256;
  double azimuth_fov_deg = 60.0;  // half-width, symmetric about boresight

  void validate() const {
    if (num_rx < std::max(rx_pair.first, rx_pair.second) + 1)
      throw DomainError("rx_pair index exceeds num_rx");
    if (rx_pair.first == rx_pair.second)
      throw DomainError("rx_pair indices must be distinct");
    if (num_chirps < 1 || num_samples < 1 || num_azimuth_bins < 1)
      throw DomainError("cube and azimuth dimensions must be >= 1");
    if (!(antenna_spacing > 0.0) || !std::isfinite(antenna_spacing))
      throw DomainError("antenna_spacing must be positive");
    if (!(azimuth_fov_deg > 0.0) || azimuth_fov_deg > 90.0)
      throw DomainError("azimuth_fov must lie in (0, 90] degrees");
    if (!(frame_rate > 0.0)) throw DomainError("frame_rate must be positive");
  }
};

/// Dimensions of one IQ frame: rx-major, chirp-next, sample-innermost.
struct CubeDims {
  std::size_t num_rx = 0;
  std::size_t num_chirps = 0;
  std::size_t num_samples = 0;

  static CubeDims from(const RadarConfig& cfg) {
    return {cfg.num_rx, cfg.num_chirps, cfg.num_samples};
  }
  std::size_t volume() const { return num_rx * num_chirps * num_samples; }
  bool operator==(const CubeDims&) const = default;
};

/// One radar frame of complex baseband samples, indexed [rx][chirp][sample].
class FrameCube {
 public:
  FrameCube() = default;
  explicit FrameCube(CubeDims dims) : dims_(dims), data_(dims.volume()) {}
  FrameCube(CubeDims dims, std::vector<cfloat> data)
      : dims_(dims), data_(std::move(data)) {
    if (data_.size() != dims_.volume())
      throw DimensionError("FrameCube payload does not match dims");
  }

  const CubeDims& dims() const { return dims_; }

  cfloat& at(std::size_t rx, std::size_t chirp, std::size_t sample) {
    return data_[index(rx, chirp, sample)];
  }
  const cfloat& at(std::size_t rx, std::size_t chirp,
                   std::size_t sample) const {
    return data_[index(rx, chirp, sample)];
  }

  std::span<const cfloat> chirp(std::size_t rx, std::size_t chirp) const {
    return {data_.data() + index(rx, chirp, 0), dims_.num_samples};
  }
  std::span<cfloat> chirp(std::size_t rx, std::size_t chirp) {
    return {data_.data() + index(rx, chirp, 0), dims_.num_samples};
  }

  std::span<const cfloat> samples() const { return data_; }
  std::span<cfloat> samples() { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cfloat& v) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
  }

  bool operator==(const FrameCube&) const = default;

 private:
  std::size_t index(std::size_t rx, std::size_t chirp,
                    std::size_t sample) const {
    return (rx * dims_.num_chirps + chirp) * dims_.num_samples + sample;
  }

  CubeDims dims_{};
  std::vector<cfloat> data_;
};

/// Dense row-major 2-D grid. Rows are range bins, columns azimuth bins.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool same_shape(const auto& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Range-azimuth intensity image. After normalize_by_max every value lies in
/// [0, 1] and the maximum is exactly 1 unless the image is identically zero.
using RAImage = Grid<double>;

/// Per-pixel detection mask, 0 or 1.
using BinaryMask = Grid<std::uint8_t>;

/// Divides by the maximum value. An all-zero image is left untouched.
inline void normalize_by_max(RAImage& img) {
  const auto vals = img.values();
  if (vals.empty()) return;
  const double peak = *std::max_element(vals.begin(), vals.end());
  if (!(peak > 0.0)) return;
  for (double& v : vals) v /= peak;
}

inline std::size_t mask_area(const BinaryMask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.values().begin(), mask.values().end(),
                    [](std::uint8_t b) { return b != 0; }));
}

/// Inclusive pixel-index box.
struct BBox {
  std::size_t row_min = 0;
  std::size_t row_max = 0;
  std::size_t col_min = 0;
  std::size_t col_max = 0;

  bool contains(std::size_t r, std::size_t c) const {
    return r >= row_min && r <= row_max && c >= col_min && c <= col_max;
  }
  std::size_t height() const { return row_max - row_min + 1; }
  std::size_t width() const { return col_max - col_min + 1; }
  std::size_t area() const { return height() * width(); }
  bool fits(std::size_t rows, std::size_t cols) const {
    return row_min <= row_max && row_max < rows && col_min <= col_max &&
           col_max < cols;
  }
  bool operator==(const BBox&) const = default;
};

/// Tight enclosure of all set pixels; nullopt for an empty mask.
inline std::optional<BBox> tight_bbox(const BinaryMask& mask) {
  std::optional<BBox> box;
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    for (std::size_t c = 0; c < mask.cols(); ++c) {
      if (!mask(r, c)) continue;
      if (!box) {
        box = BBox{r, r, c, c};
      } else {
        box->row_min = std::min(box->row_min, r);
        box->row_max = std::max(box->row_max, r);
        box->col_min = std::min(box->col_min, c);
        box->col_max = std::max(box->col_max, c);
      }
    }
  }
  return box;
}

/// Detector output: the mask plus, when non-empty, its tight bounding box.
struct Detection {
  BinaryMask mask;
  std::optional<BBox> bbox;

  bool empty() const { return !bbox.has_value(); }
};

}  // namespace ra_sentinel
