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
 * \file rd_pipeline.hpp
 * \brief IQ frame -> per-channel range-Doppler maps, and the EMA high-pass
 *        clutter filter that runs on them.
 *
 * Range axis: bin 0 is zero beat frequency, no shift. Doppler axis: stored
 * shifted so that bin num_chirps/2 is zero Doppler.
 */
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ra_sentinel/error.hpp"
#include "ra_sentinel/fft.hpp"
#include "ra_sentinel/types.hpp"

namespace ra_sentinel {

enum class WindowKind { hann, none };

inline WindowKind parse_window_kind(std::string_view s) {
  if (s == "hann") return WindowKind::hann;
  if (s == "none") return WindowKind::none;
  throw DomainError("unknown window kind: " + std::string(s));
}

inline const char* to_string(WindowKind k) {
  return k == WindowKind::hann ? "hann" : "none";
}

/// Periodic Hann, w[n] = 0.5 (1 - cos(2 pi n / N)).
inline std::vector<double> window_coefficients(WindowKind kind,
                                               std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::hann) {
    for (std::size_t i = 0; i < n; ++i)
      w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                   static_cast<double>(i) /
                                   static_cast<double>(n)));
  }
  return w;
}

inline std::vector<cdouble> remove_dc(std::span<const cdouble> chirp) {
  if (chirp.empty()) throw DimensionError("remove_dc on empty vector");
  cdouble mean{};
  for (const auto& v : chirp) mean += v;
  mean /= static_cast<double>(chirp.size());
  std::vector<cdouble> out(chirp.begin(), chirp.end());
  for (auto& v : out) v -= mean;
  return out;
}

inline std::vector<cdouble> apply_window(std::span<const cdouble> vec,
                                         WindowKind kind) {
  if (vec.empty()) throw DimensionError("apply_window on empty vector");
  std::vector<cdouble> out(vec.begin(), vec.end());
  if (kind == WindowKind::none) return out;
  const auto w = window_coefficients(kind, vec.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w[i];
  return out;
}

/// Complex spectrum indexed [rx][doppler][range].
class RangeDopplerMap {
 public:
  RangeDopplerMap() = default;
  explicit RangeDopplerMap(CubeDims dims)
      : dims_(dims), data_(dims.volume()) {}

  const CubeDims& dims() const { return dims_; }
  std::size_t num_rx() const { return dims_.num_rx; }
  std::size_t num_doppler() const { return dims_.num_chirps; }
  std::size_t num_range() const { return dims_.num_samples; }

  cdouble& at(std::size_t rx, std::size_t doppler, std::size_t range) {
    return data_[(rx * dims_.num_chirps + doppler) * dims_.num_samples + range];
  }
  const cdouble& at(std::size_t rx, std::size_t doppler,
                    std::size_t range) const {
    return data_[(rx * dims_.num_chirps + doppler) * dims_.num_samples + range];
  }

  std::span<cdouble> values() { return data_; }
  std::span<const cdouble> values() const { return data_; }

  double energy() const {
    double e = 0.0;
    for (const auto& v : data_) e += std::norm(v);
    return e;
  }

 private:
  CubeDims dims_{};
  std::vector<cdouble> data_;
};

/// DC removal + window + FFT over samples, then window + FFT over chirps
/// (shifted), independently per receive channel.
inline RangeDopplerMap range_doppler_transform(const FrameCube& frame,
                                               WindowKind window) {
  const CubeDims dims = frame.dims();
  if (dims.volume() == 0) throw DimensionError("empty frame cube");
  RangeDopplerMap rd(dims);
  const std::size_t n_chirp = dims.num_chirps;
  const std::size_t n_samp = dims.num_samples;
  const auto range_win = window_coefficients(window, n_samp);
  const auto doppler_win = window_coefficients(window, n_chirp);

  std::vector<cdouble> buf(n_samp);
  std::vector<cdouble> range_profiles(n_chirp * n_samp);
  std::vector<cdouble> slow(n_chirp);

  for (std::size_t rx = 0; rx < dims.num_rx; ++rx) {
    for (std::size_t c = 0; c < n_chirp; ++c) {
      const auto raw = frame.chirp(rx, c);
      cdouble mean{};
      for (std::size_t s = 0; s < n_samp; ++s) {
        buf[s] = cdouble(raw[s].real(), raw[s].imag());
        mean += buf[s];
      }
      mean /= static_cast<double>(n_samp);
      for (std::size_t s = 0; s < n_samp; ++s)
        buf[s] = (buf[s] - mean) * range_win[s];
      fft_inplace(buf);
      std::copy(buf.begin(), buf.end(), range_profiles.begin() + c * n_samp);
    }
    for (std::size_t r = 0; r < n_samp; ++r) {
      for (std::size_t c = 0; c < n_chirp; ++c)
        slow[c] = range_profiles[c * n_samp + r] * doppler_win[c];
      fft_inplace(slow);
      for (std::size_t d = 0; d < n_chirp; ++d)
        rd.at(rx, d, r) = slow[(d + n_chirp / 2) % n_chirp];
    }
  }
  return rd;
}

inline RangeDopplerMap range_doppler_transform(const FrameCube& frame,
                                               const RadarConfig& config,
                                               WindowKind window) {
  if (!(frame.dims() == CubeDims::from(config)))
    throw DimensionError("frame dims do not match radar config");
  return range_doppler_transform(frame, window);
}

/// Exponential-moving-average clutter estimate for one radar stream.
/// Single writer; frames must be fed in order.
class MtiState {
 public:
  explicit MtiState(double alpha = 0.9) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw DomainError("MTI alpha must lie in [0, 1)");
  }

  double alpha() const { return alpha_; }
  bool initialized() const { return clutter_.has_value(); }
  const std::optional<RangeDopplerMap>& clutter_estimate() const {
    return clutter_;
  }
  void reset() { clutter_.reset(); }

  /// Update-then-subtract. The first frame seeds the estimate and yields 0.
  RangeDopplerMap filter(const RangeDopplerMap& rd) {
    if (!clutter_) {
      clutter_ = rd;
      return RangeDopplerMap(rd.dims());
    }
    if (!(clutter_->dims() == rd.dims()))
      throw DimensionError("MTI state dims differ from input map");
    RangeDopplerMap out(rd.dims());
    auto est = clutter_->values();
    const auto in = rd.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < in.size(); ++i) {
      est[i] = alpha_ * est[i] + (1.0 - alpha_) * in[i];
      dst[i] = in[i] - est[i];
    }
    return out;
  }

 private:
  double alpha_;
  std::optional<RangeDopplerMap> clutter_;
};

inline RangeDopplerMap mti_filter(MtiState& state, const RangeDopplerMap& rd) {
  return state.filter(rd);
}

}  // namespace ra_sentinel
