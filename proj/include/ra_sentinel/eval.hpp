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
 * \file eval.hpp
 * \brief Overlap hit scoring, per-sequence accuracy, and detector-only
 *        latency benchmarking with Table-style reporting.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#endif

#include <json.hpp>

#include "ra_sentinel/error.hpp"
#include "ra_sentinel/synth.hpp"
#include "ra_sentinel/types.hpp"

namespace ra_sentinel {

/// A detector reduced to its mask output; RA-map construction is outside.
struct NamedDetector {
  std::string name;
  std::function<BinaryMask(const RAImage&)> run;
};

/// True iff any set pixel lies inside the inclusive ground-truth box.
inline bool hit_test(const BinaryMask& mask, const BBox& gt) {
  if (mask.empty()) return false;
  const std::size_t r_hi = std::min(gt.row_max, mask.rows() - 1);
  const std::size_t c_hi = std::min(gt.col_max, mask.cols() - 1);
  for (std::size_t r = gt.row_min; r <= r_hi; ++r)
    for (std::size_t c = gt.col_min; c <= c_hi; ++c)
      if (mask(r, c)) return true;
  return false;
}

inline bool hit_test(const Detection& det, const GroundTruth& gt) {
  return !det.empty() && hit_test(det.mask, gt.bbox);
}

struct EvalRecord {
  std::size_t frame_index = 0;
  std::string detector_name;
  std::optional<bool> hit;  // absent when no ground truth is available
  double latency_s = 0.0;
  std::size_t mask_area = 0;
};

struct BenchSummary {
  std::string detector_name;
  std::size_t frames = 0;
  double mean_latency_s = 0.0;
  double p50_s = 0.0;
  double p95_s = 0.0;
  double fps = 0.0;
  std::optional<double> accuracy;
  std::optional<double> peak_rss_mb;
  std::map<std::string, double> speedup_vs;
};

struct EvalResult {
  std::vector<EvalRecord> records;
  BenchSummary summary;
};

namespace detail {

/// Nearest-rank quantile of an unsorted sample.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  auto rank = static_cast<std::ptrdiff_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  rank = std::clamp<std::ptrdiff_t>(rank, 0, static_cast<std::ptrdiff_t>(v.size()) - 1);
  return v[static_cast<std::size_t>(rank)];
}

inline void fill_latency_stats(BenchSummary& s, const std::vector<double>& lat) {
  s.frames = lat.size();
  if (lat.empty()) return;
  s.mean_latency_s = std::accumulate(lat.begin(), lat.end(), 0.0) /
                     static_cast<double>(lat.size());
  s.p50_s = quantile(lat, 0.50);
  s.p95_s = quantile(lat, 0.95);
  s.fps = s.mean_latency_s > 0.0 ? 1.0 / s.mean_latency_s : 0.0;
}

template <typename Fn>
double time_call(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace detail

/// Peak resident set size of this process, when the platform reports it.
inline std::optional<double> peak_rss_mb() {
#if defined(__linux__)
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) == 0)
    return static_cast<double>(usage.ru_maxrss) / 1024.0;  // KiB on Linux
#elif defined(__APPLE__)
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) == 0)
    return static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);
#endif
  return std::nullopt;
}

/// Runs `det` over aligned frame/truth sequences, timing only the detector.
inline EvalResult evaluate_sequence(std::span<const RAImage> frames,
                                    std::span<const GroundTruth> truths,
                                    const NamedDetector& det) {
  if (frames.size() != truths.size())
    throw DimensionError("frame and ground-truth sequences differ in length");
  EvalResult out;
  out.records.reserve(frames.size());
  std::vector<double> latencies;
  latencies.reserve(frames.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    BinaryMask mask;
    const double dt = detail::time_call([&] { mask = det.run(frames[i]); });
    if (!mask.same_shape(frames[i]))
      throw DimensionError("detector '" + det.name + "' returned a mis-sized mask");
    const bool hit = hit_test(mask, truths[i].bbox);
    hits += hit ? 1 : 0;
    latencies.push_back(dt);
    out.records.push_back({i, det.name, hit, dt, mask_area(mask)});
  }
  out.summary.detector_name = det.name;
  detail::fill_latency_stats(out.summary, latencies);
  out.summary.accuracy =
      frames.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(frames.size());
  return out;
}

struct BenchOptions {
  std::size_t warmup = 10;
  std::size_t repeats = 3;
  std::string baseline = "os";
};

/// Fills speedup_vs[b] = mean(b) / mean(a) for every pair of summaries.
inline void compute_speedups(std::vector<BenchSummary>& summaries) {
  for (auto& a : summaries) {
    a.speedup_vs.clear();
    for (const auto& b : summaries)
      if (a.mean_latency_s > 0.0)
        a.speedup_vs[b.detector_name] = b.mean_latency_s / a.mean_latency_s;
  }
}

/// Sequential, single-threaded latency benchmark. Warmup calls cycle over the
/// frames and are discarded; then `repeats` full passes are timed.
inline std::vector<BenchSummary> benchmark_detectors(
    std::span<const RAImage> frames, std::span<const NamedDetector> detectors,
    const BenchOptions& opts,
    std::span<const GroundTruth> truths = {}) {
  if (opts.repeats < 1) throw DomainError("repeats must be >= 1");
  if (!truths.empty() && truths.size() != frames.size())
    throw DimensionError("frame and ground-truth sequences differ in length");
  std::vector<BenchSummary> out;
  volatile std::size_t sink = 0;
  for (const auto& det : detectors) {
    for (std::size_t i = 0; i < opts.warmup && !frames.empty(); ++i)
      sink = sink + mask_area(det.run(frames[i % frames.size()]));
    std::vector<double> lat;
    lat.reserve(frames.size() * opts.repeats);
    std::size_t hits = 0;
    for (std::size_t rep = 0; rep < opts.repeats; ++rep) {
      for (std::size_t i = 0; i < frames.size(); ++i) {
        BinaryMask mask;
        lat.push_back(detail::time_call([&] { mask = det.run(frames[i]); }));
        sink = sink + mask_area(mask);
        if (rep == 0 && !truths.empty()) hits += hit_test(mask, truths[i].bbox) ? 1 : 0;
      }
    }
    BenchSummary s;
    s.detector_name = det.name;
    detail::fill_latency_stats(s, lat);
    if (!truths.empty() && !frames.empty())
      s.accuracy = static_cast<double>(hits) / static_cast<double>(frames.size());
    s.peak_rss_mb = peak_rss_mb();
    out.push_back(std::move(s));
  }
  compute_speedups(out);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const EvalRecord& r) {
  nlohmann::json j;
  j["frame"] = r.frame_index;
  j["detector"] = r.detector_name;
  j["hit"] = r.hit ? nlohmann::json(*r.hit) : nlohmann::json(nullptr);
  j["latency_s"] = r.latency_s;
  j["mask_area"] = r.mask_area;
  return j;
}

inline std::string to_json_lines(std::span<const EvalRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

inline nlohmann::json to_json(const BenchSummary& s) {
  nlohmann::json j;
  j["detector"] = s.detector_name;
  j["frames"] = s.frames;
  j["mean_latency_s"] = s.mean_latency_s;
  j["p50_s"] = s.p50_s;
  j["p95_s"] = s.p95_s;
  j["fps"] = s.fps;
  j["accuracy"] = s.accuracy ? nlohmann::json(*s.accuracy) : nlohmann::json(nullptr);
  j["peak_rss_mb"] = s.peak_rss_mb ? nlohmann::json(*s.peak_rss_mb) : nlohmann::json(nullptr);
  j["speedup_vs"] = s.speedup_vs;
  return j;
}

inline nlohmann::json to_json(std::span<const BenchSummary> summaries,
                              const std::string& baseline) {
  nlohmann::json j;
  j["baseline"] = baseline;
  j["detectors"] = nlohmann::json::array();
  for (const auto& s : summaries) j["detectors"].push_back(to_json(s));
  return j;
}

/// Plain-text table: Method | Latency | p50 | p95 | FPS | RAM | Speedup | Acc.
inline std::string format_table(std::span<const BenchSummary> summaries,
                                const std::string& baseline) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %12s %10s %10s %9s %10s %12s %9s\n",
                "Method", "Latency(ms)", "p50(ms)", "p95(ms)", "FPS", "RAM(MB)",
                ("Speedup(vs " + baseline + ")").c_str(), "Acc(%)");
  out += line;
  for (const auto& s : summaries) {
    const auto it = s.speedup_vs.find(baseline);
    const std::string speed = it == s.speedup_vs.end()
                                  ? std::string("n/a")
                                  : std::to_string(it->second).substr(0, 6) + "x";
    const std::string ram = s.peak_rss_mb ? std::to_string(*s.peak_rss_mb).substr(0, 7) : "n/a";
    const std::string acc = s.accuracy ? std::to_string(*s.accuracy * 100.0).substr(0, 6) : "n/a";
    std::snprintf(line, sizeof line, "%-10s %12.3f %10.3f %10.3f %9.1f %10s %12s %9s\n",
                  s.detector_name.c_str(), s.mean_latency_s * 1e3, s.p50_s * 1e3,
                  s.p95_s * 1e3, s.fps, ram.c_str(), speed.c_str(), acc.c_str());
    out += line;
  }
  return out;
}

inline nlohmann::json to_json(const GroundTruth& gt, std::size_t frame_index) {
  return {{"frame", frame_index},
          {"row_min", gt.bbox.row_min},
          {"row_max", gt.bbox.row_max},
          {"col_min", gt.bbox.col_min},
          {"col_max", gt.bbox.col_max},
          {"center_row", gt.center_row},
          {"center_col", gt.center_col}};
}

inline GroundTruth ground_truth_from_json(const nlohmann::json& j) {
  try {
    GroundTruth gt;
    gt.bbox = {j.at("row_min").get<std::size_t>(), j.at("row_max").get<std::size_t>(),
               j.at("col_min").get<std::size_t>(), j.at("col_max").get<std::size_t>()};
    gt.center_row = j.value("center_row", 0.0);
    gt.center_col = j.value("center_col", 0.0);
    return gt;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed ground-truth record: ") + e.what());
  }
}

}  // namespace ra_sentinel
