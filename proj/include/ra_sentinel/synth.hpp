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
 * \file synth.hpp
 * \brief Seeded ground-truthed scenes: RA images (clutter ridge + human lump
 *        + half-normal noise) and raw IQ cubes with a micro-moving point
 *        target over static clutter.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "ra_sentinel/beamform.hpp"
#include "ra_sentinel/error.hpp"
#include "ra_sentinel/rng.hpp"
#include "ra_sentinel/types.hpp"

namespace ra_sentinel {

enum class SceneKind { ra_scene, iq_point_target };

struct LumpSpec {
  double range_bin = 40.0;
  double azimuth_bin = 128.0;
  double sigma_range = 2.0;
  double sigma_azimuth = 6.0;
  double amplitude = 1.0;
  // Per-frame uniform offset of the lump center, drawn from its own stream.
  double jitter_range = 4.0;
  double jitter_azimuth = 48.0;
};

struct ClutterSpec {
  double range_bin = 40.0;
  double amplitude = 0.6;
  double thickness = 1.5;     // Gaussian sigma across range, bins
  double azimuth_deg = -20.0;  // iq mode only
};

struct TargetSpec {
  double range_m = 3.0;
  double azimuth_deg = 15.0;
  double amplitude = 1.0;
  double micro_motion_bins = 0.3;
  double micro_motion_hz = 0.25;
};

struct ScenarioSpec {
  std::uint64_t seed = 1;
  SceneKind scene_kind = SceneKind::ra_scene;
  std::size_t num_frames = 100;
  LumpSpec lump;
  ClutterSpec clutter;
  double noise_sigma = 0.05;
  TargetSpec target;
  double range_resolution_m = 0.15;
  double wavelength_m = 0.005;  // 60 GHz carrier
  RadarConfig radar;

  void validate() const {
    radar.validate();
    if (lump.amplitude < 0 || clutter.amplitude < 0 || target.amplitude < 0)
      throw DomainError("amplitudes must be non-negative");
    if (noise_sigma < 0) throw DomainError("noise_sigma must be non-negative");
    if (!(lump.sigma_range > 0 && lump.sigma_azimuth > 0))
      throw DomainError("lump extents must be positive");
    if (!(clutter.thickness > 0)) throw DomainError("clutter thickness must be positive");
    if (lump.range_bin < 0 || lump.range_bin > double(radar.num_samples - 1) ||
        lump.azimuth_bin < 0 || lump.azimuth_bin > double(radar.num_azimuth_bins - 1))
      throw DomainError("lump center outside the RA grid");
    if (lump.jitter_range < 0 || lump.jitter_azimuth < 0)
      throw DomainError("jitter must be non-negative");
    if (!(range_resolution_m > 0 && wavelength_m > 0))
      throw DomainError("range resolution and wavelength must be positive");
  }
};

struct GroundTruth {
  BBox bbox;
  double center_row = 0.0;
  double center_col = 0.0;
};

namespace detail {

inline std::size_t clamp_bin(double v, std::size_t n) {
  const double r = std::round(v);
  if (r <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(r), n - 1);
}

inline BBox box_around(double row, double col, double half_r, double half_c,
                       std::size_t rows, std::size_t cols) {
  return {clamp_bin(row - half_r, rows), clamp_bin(row + half_r, rows),
          clamp_bin(col - half_c, cols), clamp_bin(col + half_c, cols)};
}

}  // namespace detail

/// Lump center for a frame after jitter, clamped onto the grid.
inline std::pair<double, double> lump_center(const ScenarioSpec& spec,
                                             std::size_t frame_index) {
  Xoshiro256 rng = make_stream(spec.seed, Stream::placement, frame_index);
  const double dr = rng.uniform(-spec.lump.jitter_range, spec.lump.jitter_range);
  const double dc = rng.uniform(-spec.lump.jitter_azimuth, spec.lump.jitter_azimuth);
  const double rows = static_cast<double>(spec.radar.num_samples - 1);
  const double cols = static_cast<double>(spec.radar.num_azimuth_bins - 1);
  return {std::clamp(spec.lump.range_bin + dr, 0.0, rows),
          std::clamp(spec.lump.azimuth_bin + dc, 0.0, cols)};
}

/// H x W scene (H = num_samples, W = num_azimuth_bins), max-normalized.
/// Ground truth is the lump center +/- 3 sigma, clipped to the grid.
inline std::pair<RAImage, GroundTruth> gen_ra_scene(const ScenarioSpec& spec,
                                                    std::size_t frame_index) {
  spec.validate();
  if (spec.scene_kind != SceneKind::ra_scene)
    throw DomainError("gen_ra_scene requires scene_kind = ra_scene");
  const std::size_t rows = spec.radar.num_samples;
  const std::size_t cols = spec.radar.num_azimuth_bins;
  const auto [hc, wc] = lump_center(spec, frame_index);
  Xoshiro256 noise = make_stream(spec.seed, Stream::noise, frame_index);

  RAImage img(rows, cols);
  const double inv_ridge = 1.0 / (2.0 * spec.clutter.thickness * spec.clutter.thickness);
  const double inv_r = 1.0 / (2.0 * spec.lump.sigma_range * spec.lump.sigma_range);
  const double inv_c = 1.0 / (2.0 * spec.lump.sigma_azimuth * spec.lump.sigma_azimuth);
  for (std::size_t h = 0; h < rows; ++h) {
    const double dh_ridge = static_cast<double>(h) - spec.clutter.range_bin;
    const double ridge = spec.clutter.amplitude * std::exp(-dh_ridge * dh_ridge * inv_ridge);
    const double dh = static_cast<double>(h) - hc;
    for (std::size_t w = 0; w < cols; ++w) {
      const double dw = static_cast<double>(w) - wc;
      const double lump =
          spec.lump.amplitude * std::exp(-(dh * dh * inv_r + dw * dw * inv_c));
      const double n = spec.noise_sigma > 0.0 ? std::abs(spec.noise_sigma * noise.normal()) : 0.0;
      img(h, w) = std::max(ridge + lump + n, 0.0);
    }
  }
  normalize_by_max(img);
  GroundTruth gt{detail::box_around(hc, wc, 3.0 * spec.lump.sigma_range,
                                    3.0 * spec.lump.sigma_azimuth, rows, cols),
                 hc, wc};
  return {std::move(img), gt};
}

/// Half-extent of the iq-mode ground-truth box, in (range, azimuth) bins.
inline constexpr double kIqTruthHalfRange = 2.0;
inline constexpr double kIqTruthHalfAzimuth = 8.0;

inline double target_range_bin(const ScenarioSpec& spec) {
  return spec.target.range_m / spec.range_resolution_m;
}

/// One IQ frame: micro-moving point target + static clutter tone + complex
/// white noise (noise_sigma is the per-sample complex standard deviation).
inline std::pair<FrameCube, GroundTruth> gen_iq_point_target(
    const ScenarioSpec& spec, const RadarConfig& config,
    std::size_t frame_index) {
  spec.validate();
  config.validate();
  if (spec.scene_kind != SceneKind::iq_point_target)
    throw DomainError("gen_iq_point_target requires scene_kind = iq_point_target");
  const double k0 = target_range_bin(spec);
  const double n_samp = static_cast<double>(config.num_samples);
  if (!(k0 >= 0.0 && k0 < n_samp))
    throw DomainError("target range outside the unambiguous range");
  if (!(spec.clutter.range_bin >= 0.0 && spec.clutter.range_bin < n_samp))
    throw DomainError("clutter range outside the unambiguous range");

  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double t = static_cast<double>(frame_index) / config.frame_rate;
  const double wobble = spec.target.micro_motion_bins *
                        std::sin(two_pi * spec.target.micro_motion_hz * t);
  const double k_target = k0 + wobble;

  Xoshiro256 target_rng = make_stream(spec.seed, Stream::target, 0);
  Xoshiro256 clutter_rng = make_stream(spec.seed, Stream::clutter, 0);
  Xoshiro256 noise_rng = make_stream(spec.seed, Stream::noise, frame_index);
  const double target_phase0 = two_pi * target_rng.uniform();
  const double clutter_phase0 = two_pi * clutter_rng.uniform();
  const double carrier_phase =
      target_phase0 + 4.0 * std::numbers::pi * wobble * spec.range_resolution_m /
                          spec.wavelength_m;

  const auto [first, second] = config.rx_pair;
  auto element_position = [&](std::size_t rx) {
    return (static_cast<double>(rx) - static_cast<double>(first)) /
           (static_cast<double>(second) - static_cast<double>(first)) *
           config.antenna_spacing;
  };
  const double sin_t = std::sin(spec.target.azimuth_deg * std::numbers::pi / 180.0);
  const double sin_c = std::sin(spec.clutter.azimuth_deg * std::numbers::pi / 180.0);
  const double comp_sigma = spec.noise_sigma / std::sqrt(2.0);

  FrameCube cube(CubeDims::from(config));
  for (std::size_t rx = 0; rx < config.num_rx; ++rx) {
    const double pos = element_position(rx);
    const double tgt_rx = carrier_phase - two_pi * pos * sin_t;
    const double clt_rx = clutter_phase0 - two_pi * pos * sin_c;
    for (std::size_t c = 0; c < config.num_chirps; ++c) {
      auto chirp = cube.chirp(rx, c);
      for (std::size_t n = 0; n < config.num_samples; ++n) {
        const double nn = static_cast<double>(n);
        cdouble s = std::polar(spec.target.amplitude,
                               two_pi * k_target * nn / n_samp + tgt_rx);
        s += std::polar(spec.clutter.amplitude,
                        two_pi * spec.clutter.range_bin * nn / n_samp + clt_rx);
        if (comp_sigma > 0.0) {
          const double re = comp_sigma * noise_rng.normal();
          const double im = comp_sigma * noise_rng.normal();
          s += cdouble(re, im);
        }
        chirp[n] = cfloat(static_cast<float>(s.real()), static_cast<float>(s.imag()));
      }
    }
  }

  const SteeringTable table = build_steering_table(config);
  const double col = static_cast<double>(nearest_azimuth_bin(table, spec.target.azimuth_deg));
  GroundTruth gt{detail::box_around(k0, col, kIqTruthHalfRange, kIqTruthHalfAzimuth,
                                    config.num_samples, config.num_azimuth_bins),
                 k0, col};
  return {std::move(cube), gt};
}

// ---------------------------------------------------------------------------
// Scenario files: one `key = value` per line, `#` starts a comment.

namespace detail {

inline std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ConfigError("invalid numeric value '" + text + "'", line);
  return value;
}

}  // namespace detail

inline ScenarioSpec parse_scenario(std::istream& in) {
  ScenarioSpec spec;
  using Setter = std::function<void(const std::string&, std::size_t)>;
  auto real = [](double& dst) -> Setter {
    return [&dst](const std::string& v, std::size_t l) {
      dst = detail::parse_number<double>(v, l);
    };
  };
  auto count = [](std::size_t& dst) -> Setter {
    return [&dst](const std::string& v, std::size_t l) {
      dst = detail::parse_number<std::size_t>(v, l);
    };
  };
  const std::map<std::string, Setter> setters{
      {"seed", [&](const std::string& v, std::size_t l) {
         spec.seed = detail::parse_number<std::uint64_t>(v, l);
       }},
      {"scene_kind", [&](const std::string& v, std::size_t l) {
         if (v == "ra_scene") spec.scene_kind = SceneKind::ra_scene;
         else if (v == "iq_point_target") spec.scene_kind = SceneKind::iq_point_target;
         else throw ConfigError("unknown scene_kind '" + v + "'", l);
       }},
      {"num_frames", count(spec.num_frames)},
      {"lump_range_bin", real(spec.lump.range_bin)},
      {"lump_azimuth_bin", real(spec.lump.azimuth_bin)},
      {"lump_sigma_range", real(spec.lump.sigma_range)},
      {"lump_sigma_azimuth", real(spec.lump.sigma_azimuth)},
      {"lump_amplitude", real(spec.lump.amplitude)},
      {"lump_jitter_range", real(spec.lump.jitter_range)},
      {"lump_jitter_azimuth", real(spec.lump.jitter_azimuth)},
      {"clutter_range_bin", real(spec.clutter.range_bin)},
      {"clutter_amplitude", real(spec.clutter.amplitude)},
      {"clutter_thickness", real(spec.clutter.thickness)},
      {"clutter_azimuth_deg", real(spec.clutter.azimuth_deg)},
      {"noise_sigma", real(spec.noise_sigma)},
      {"target_range_m", real(spec.target.range_m)},
      {"target_azimuth_deg", real(spec.target.azimuth_deg)},
      {"target_amplitude", real(spec.target.amplitude)},
      {"micro_motion_bins", real(spec.target.micro_motion_bins)},
      {"micro_motion_hz", real(spec.target.micro_motion_hz)},
      {"range_resolution_m", real(spec.range_resolution_m)},
      {"wavelength_m", real(spec.wavelength_m)},
      {"num_rx", count(spec.radar.num_rx)},
      {"num_chirps", count(spec.radar.num_chirps)},
      {"num_samples", count(spec.radar.num_samples)},
      {"num_azimuth_bins", count(spec.radar.num_azimuth_bins)},
      {"frame_rate", real(spec.radar.frame_rate)},
      {"antenna_spacing", real(spec.radar.antenna_spacing)},
      {"azimuth_fov", real(spec.radar.azimuth_fov_deg)},
      {"rx_pair", [&](const std::string& v, std::size_t l) {
         const auto comma = v.find(',');
         if (comma == std::string::npos)
           throw ConfigError("rx_pair expects 'a,b'", l);
         spec.radar.rx_pair = {
             detail::parse_number<std::size_t>(detail::trim(v.substr(0, comma)), l),
             detail::parse_number<std::size_t>(detail::trim(v.substr(comma + 1)), l)};
       }},
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown key '" + key + "'", line_no);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no);
    it->second(value, line_no);
  }
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line_no);
  }
  return spec;
}

inline ScenarioSpec parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

inline ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path.string());
  return parse_scenario(in);
}

}  // namespace ra_sentinel
