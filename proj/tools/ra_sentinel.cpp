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

// ra_sentinel: command-line front end.
//
//   ra_sentinel run    cube.riq... [-d all] [-o out] [--export ra,masks,records,summary]
//   ra_sentinel synth  scenario.cfg -o out
//   ra_sentinel ablate SOURCE [-p 90,95,99] [-o out]
//   ra_sentinel bench  SOURCE [-d ca,os,lump] [--warmup 10] [--repeats 3]
//
// SOURCE is a cube file, a directory of RA frames written by `synth`, or a
// scenario file.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ra_sentinel/ra_sentinel.hpp"

namespace fs = std::filesystem;
using namespace ra_sentinel;

namespace {

constexpr int kExitBadParams = 2;
constexpr int kExitBadFile = 3;
constexpr int kExitBadConfig = 4;
constexpr int kExitCheckFailed = 5;

const char* kDefaultsTable = R"(Defaults:
  radar      3 rx x 128 chirps x 64 samples, rx pair (0,2), spacing 0.5 lambda,
             256 azimuth bins over +/-60 deg (uniform in sin)
  pipeline   window hann (range and Doppler), MTI alpha 0.9
  CFAR       pfa 1e-3, ref band 8, guard band 2, OS rank 0.75 (k-th largest),
             OS scale solved per reference count from the exponential-noise
             order-statistic law (24.919 at N=264, k=198)
  lump       percentile 99 (nearest rank), min area 12 px, 2x2 closing,
             8-connectivity
  bench      warmup 10 frames, repeats 3, baseline os
  threads    hardware concurrency, capped by RA_SENTINEL_THREADS
)";

struct Options {
  std::vector<std::string> inputs;
  std::vector<std::string> detectors{"all"};
  CfarParams cfar;
  double os_scale = 0.0;
  LumpParams lump;
  int connectivity = 8;
  double mti_alpha = 0.9;
  std::string window = "hann";
  double spacing = 0.5;
  std::size_t azimuth_bins = 256;
  double fov = 60.0;
  std::string out = "ra_out";
  std::vector<std::string> exports{"records", "summary"};
  std::string gt_path;
  bool time_pipeline = false;
  std::vector<double> percentiles{90.0, 95.0, 99.0};
  long frame = -1;
  std::size_t warmup = 10;
  std::size_t repeats = 3;
  std::string baseline = "os";
  long seed = -1;
};

void add_cfar_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--pfa", o.cfar.p_fa, "CFAR false-alarm probability");
  cmd->add_option("--ref-band", o.cfar.ref_band, "CFAR reference half-width r");
  cmd->add_option("--guard-band", o.cfar.guard_band, "CFAR guard half-width g");
  cmd->add_option("--os-rank", o.cfar.os_rank_fraction, "OS-CFAR rank fraction");
  cmd->add_option("--os-scale", o.os_scale, "explicit OS-CFAR threshold multiplier");
}

void add_lump_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("-p,--percentile", o.lump.percentile, "lump gate percentile (0,100)");
  cmd->add_option("--min-area", o.lump.min_area, "minimum blob area in pixels");
  cmd->add_option("--closing-se", o.lump.closing_se, "closing element edge length");
  cmd->add_option("--connectivity", o.connectivity, "4 or 8");
}

void add_front_end_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--mti-alpha", o.mti_alpha, "MTI smoothing factor [0,1)");
  cmd->add_option("--window", o.window, "hann | none");
  cmd->add_option("--spacing", o.spacing, "rx pair spacing in wavelengths");
  cmd->add_option("--azimuth-bins", o.azimuth_bins, "azimuth grid size W");
  cmd->add_option("--fov", o.fov, "azimuth half field of view, degrees");
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::vector<std::string> resolve_detectors(const Options& o) {
  std::vector<std::string> names;
  for (const auto& d : split_list(o.detectors)) {
    if (d == "all") {
      for (const auto& n : detector_names())
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
      continue;
    }
    if (std::find(detector_names().begin(), detector_names().end(), d) ==
        detector_names().end())
      throw DomainError("unknown detector '" + d + "' (expected ca, os, lump, all)");
    if (std::find(names.begin(), names.end(), d) == names.end()) names.push_back(d);
  }
  if (names.empty()) throw DomainError("no detector selected");
  return names;
}

void finalize(Options& o) {
  if (o.os_scale > 0.0) o.cfar.os_scale = o.os_scale;
  o.lump.connectivity = parse_connectivity(o.connectivity);
  o.cfar.validate();
  o.lump.validate();
  parse_window_kind(o.window);
  MtiState check(o.mti_alpha);
}

RadarConfig radar_for(const Options& o, const CubeDims& dims) {
  RadarConfig cfg;
  cfg.num_rx = dims.num_rx;
  cfg.num_chirps = dims.num_chirps;
  cfg.num_samples = dims.num_samples;
  cfg.antenna_spacing = o.spacing;
  cfg.num_azimuth_bins = o.azimuth_bins;
  cfg.azimuth_fov_deg = o.fov;
  cfg.validate();
  return cfg;
}

std::string frame_name(const std::string& prefix, std::size_t i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", i);
  return prefix + buf + ext;
}

bool is_cube_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && std::equal(magic, magic + 4, kCubeMagic.begin());
}

std::vector<GroundTruth> read_truth_lines(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open ground truth: " + p.string());
  std::vector<GroundTruth> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(ground_truth_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad ground-truth line in " + p.string() + ": " + e.what());
    }
  }
  return out;
}

void write_truth_lines(const fs::path& p, const std::vector<GroundTruth>& truths) {
  std::string text;
  for (std::size_t i = 0; i < truths.size(); ++i) text += to_json(truths[i], i).dump() + "\n";
  write_bytes(p, text);
}

/// Ground truth from --gt, else a sibling "<input>.gt.jsonl" when present.
std::optional<std::vector<GroundTruth>> truth_for(const Options& o, const fs::path& input) {
  if (!o.gt_path.empty()) return read_truth_lines(o.gt_path);
  const fs::path sibling = input.string() + ".gt.jsonl";
  if (fs::exists(sibling)) return read_truth_lines(sibling);
  return std::nullopt;
}

struct RaSequence {
  std::vector<RAImage> frames;
  std::optional<std::vector<GroundTruth>> truths;
};

RaSequence frames_from_cube(const Options& o, const fs::path& path) {
  CubeReader reader(path);
  const RadarConfig cfg = radar_for(o, reader.header().dims);
  RaPipeline pipe(cfg, parse_window_kind(o.window), o.mti_alpha);
  RaSequence seq;
  FrameCube frame;
  while (reader.next(frame)) seq.frames.push_back(pipe.process(frame));
  seq.truths = truth_for(o, path);
  return seq;
}

RaSequence frames_from_scenario(const Options& o, const fs::path& path) {
  ScenarioSpec spec = load_scenario(path);
  if (o.seed >= 0) spec.seed = static_cast<std::uint64_t>(o.seed);
  RaSequence seq;
  seq.truths.emplace();
  if (spec.scene_kind == SceneKind::ra_scene) {
    for (std::size_t i = 0; i < spec.num_frames; ++i) {
      auto [img, gt] = gen_ra_scene(spec, i);
      seq.frames.push_back(std::move(img));
      seq.truths->push_back(gt);
    }
    return seq;
  }
  RadarConfig cfg = spec.radar;
  cfg.antenna_spacing = o.spacing;
  cfg.num_azimuth_bins = o.azimuth_bins;
  cfg.azimuth_fov_deg = o.fov;
  RaPipeline pipe(cfg, parse_window_kind(o.window), o.mti_alpha);
  for (std::size_t i = 0; i < spec.num_frames; ++i) {
    auto [cube, gt] = gen_iq_point_target(spec, cfg, i);
    seq.frames.push_back(pipe.process(cube));
    seq.truths->push_back(gt);
  }
  return seq;
}

RaSequence frames_from_directory(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("frame_", 0) == 0 && entry.path().extension() == ".pgm")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  RaSequence seq;
  for (const auto& f : files) seq.frames.push_back(read_pgm(f));
  if (fs::exists(dir / "ground_truth.jsonl"))
    seq.truths = read_truth_lines(dir / "ground_truth.jsonl");
  return seq;
}

RaSequence load_source(const Options& o, const fs::path& path) {
  if (fs::is_directory(path)) return frames_from_directory(path);
  if (!fs::exists(path)) throw IoError("no such input: " + path.string());
  if (is_cube_file(path)) return frames_from_cube(o, path);
  return frames_from_scenario(o, path);
}

// ---------------------------------------------------------------------------

int cmd_run(Options& o) {
  finalize(o);
  const auto names = resolve_detectors(o);
  std::vector<NamedDetector> detectors;
  for (const auto& n : names) detectors.push_back(make_detector(n, o.cfar, o.lump));
  const auto exports = split_list(o.exports);
  const std::set<std::string> toggles(exports.begin(), exports.end());
  for (const auto& t : toggles)
    if (t != "ra" && t != "masks" && t != "records" && t != "summary" && t != "none")
      throw DomainError("unknown export '" + t + "'");
  fs::create_directories(o.out);
  const WindowKind window = parse_window_kind(o.window);
  const std::size_t workers = worker_count();
  nlohmann::json summary = nlohmann::json::array();

  for (const auto& input : o.inputs) {
    const fs::path in_path(input);
    const std::string stem = in_path.stem().string();
    CubeReader reader(in_path);
    const RadarConfig cfg = radar_for(o, reader.header().dims);
    RaPipeline pipe(cfg, window, o.mti_alpha);
    const auto truths = truth_for(o, in_path);
    if (truths && truths->size() != reader.header().num_frames)
      throw FormatError("ground truth has " + std::to_string(truths->size()) +
                        " records but cube has " +
                        std::to_string(reader.header().num_frames) + " frames");

    std::vector<std::vector<EvalRecord>> records(detectors.size());
    std::vector<double> pipeline_latency;
    constexpr std::size_t kChunk = 32;
    std::vector<FrameCube> chunk;
    std::size_t base = 0;
    bool more = true;
    while (more) {
      chunk.clear();
      FrameCube frame;
      while (chunk.size() < kChunk && (more = reader.next(frame))) chunk.push_back(std::move(frame));
      if (chunk.empty()) break;

      // RD transforms are independent; the MTI recursion is not.
      std::vector<RangeDopplerMap> rd(chunk.size());
      std::vector<double> t_front(chunk.size(), 0.0);
      parallel_for(chunk.size(), [&](std::size_t i) {
        t_front[i] = detail::time_call(
            [&] { rd[i] = range_doppler_transform(chunk[i], cfg, window); });
      }, workers);
      std::vector<RAImage> images(chunk.size());
      for (std::size_t i = 0; i < chunk.size(); ++i)
        t_front[i] += detail::time_call([&] { rd[i] = pipe.suppress_clutter(rd[i]); });
      parallel_for(chunk.size(), [&](std::size_t i) {
        t_front[i] += detail::time_call(
            [&] { images[i] = build_ra_image(rd[i], pipe.steering(), cfg); });
      }, workers);

      std::vector<std::vector<EvalRecord>> chunk_records(
          detectors.size(), std::vector<EvalRecord>(chunk.size()));
      parallel_for(chunk.size(), [&](std::size_t i) {
        const std::size_t idx = base + i;
        if (toggles.count("ra"))
          export_image(images[i], fs::path(o.out) / frame_name(stem + "_ra_", idx, ".pgm"),
                       ImageFormat::pgm16);
        for (std::size_t d = 0; d < detectors.size(); ++d) {
          BinaryMask mask;
          const double dt = detail::time_call([&] { mask = detectors[d].run(images[i]); });
          EvalRecord rec{idx, detectors[d].name, std::nullopt, dt, mask_area(mask)};
          if (truths) rec.hit = hit_test(mask, (*truths)[idx].bbox);
          chunk_records[d][i] = rec;
          if (toggles.count("masks"))
            export_image(mask,
                         fs::path(o.out) /
                             frame_name(stem + "_mask_" + detectors[d].name + "_", idx, ".pgm"),
                         ImageFormat::pgm16);
        }
      }, workers);
      for (std::size_t d = 0; d < detectors.size(); ++d)
        records[d].insert(records[d].end(), chunk_records[d].begin(), chunk_records[d].end());
      pipeline_latency.insert(pipeline_latency.end(), t_front.begin(), t_front.end());
      base += chunk.size();
    }

    std::vector<BenchSummary> summaries;
    for (std::size_t d = 0; d < detectors.size(); ++d) {
      if (toggles.count("records"))
        write_bytes(fs::path(o.out) / (stem + "_records_" + detectors[d].name + ".jsonl"),
                    to_json_lines(records[d]));
      BenchSummary s;
      s.detector_name = detectors[d].name;
      std::vector<double> lat;
      std::size_t hits = 0;
      for (const auto& r : records[d]) {
        lat.push_back(r.latency_s);
        hits += r.hit.value_or(false) ? 1 : 0;
      }
      detail::fill_latency_stats(s, lat);
      if (truths && !records[d].empty())
        s.accuracy = static_cast<double>(hits) / static_cast<double>(records[d].size());
      s.peak_rss_mb = peak_rss_mb();
      summaries.push_back(std::move(s));
    }
    compute_speedups(summaries);
    for (const auto& s : summaries) {
      nlohmann::json j = to_json(s);
      j["input"] = input;
      if (o.time_pipeline) {
        BenchSummary front;
        detail::fill_latency_stats(front, pipeline_latency);
        j["pipeline_mean_latency_s"] = front.mean_latency_s;
        j["pipeline_p95_s"] = front.p95_s;
      }
      summary.push_back(j);
    }
    std::cout << input << ": " << base << " frames, " << detectors.size() << " detector(s)\n";
  }
  if (toggles.count("summary"))
    write_bytes(fs::path(o.out) / "summary.json", summary.dump(2) + "\n");
  return 0;
}

int cmd_synth(Options& o) {
  ScenarioSpec spec = load_scenario(o.inputs.at(0));
  if (o.seed >= 0) spec.seed = static_cast<std::uint64_t>(o.seed);
  const fs::path out(o.out);
  std::vector<GroundTruth> truths;
  if (spec.scene_kind == SceneKind::iq_point_target) {
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::vector<FrameCube> frames;
    frames.reserve(spec.num_frames);
    for (std::size_t i = 0; i < spec.num_frames; ++i) {
      auto [cube, gt] = gen_iq_point_target(spec, spec.radar, i);
      frames.push_back(std::move(cube));
      truths.push_back(gt);
    }
    write_cube_file(out, spec.radar, frames);
    write_truth_lines(out.string() + ".gt.jsonl", truths);
    std::cout << "wrote " << frames.size() << " IQ frames to " << out.string() << "\n";
    return 0;
  }
  fs::create_directories(out);
  for (std::size_t i = 0; i < spec.num_frames; ++i) {
    auto [img, gt] = gen_ra_scene(spec, i);
    export_image(img, out / frame_name("frame_", i, ".pgm"), ImageFormat::pgm16);
    truths.push_back(gt);
  }
  write_truth_lines(out / "ground_truth.jsonl", truths);
  std::cout << "wrote " << spec.num_frames << " RA frames (" << spec.radar.num_samples << "x"
            << spec.radar.num_azimuth_bins << ") to " << out.string() << "\n";
  return 0;
}

int cmd_ablate(Options& o) {
  finalize(o);
  std::vector<double> ps;
  for (double p : o.percentiles) {
    if (std::find(ps.begin(), ps.end(), p) != ps.end()) {
      std::cerr << "warning: duplicate percentile " << p << " ignored\n";
      continue;
    }
    if (!(p > 0.0 && p < 100.0)) throw DomainError("percentile must lie in (0, 100)");
    ps.push_back(p);
  }
  std::sort(ps.begin(), ps.end());

  const RaSequence seq = load_source(o, o.inputs.at(0));
  if (seq.frames.empty()) throw DomainError("input holds no frames");
  std::size_t idx = 0;
  if (o.frame >= 0) {
    idx = static_cast<std::size_t>(o.frame);
    if (idx >= seq.frames.size()) throw DomainError("--frame beyond end of input");
  } else {
    // First frame with any signal (the MTI zeroes frame 0 of a cube).
    while (idx + 1 < seq.frames.size()) {
      const auto v = seq.frames[idx].values();
      if (std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; })) break;
      ++idx;
    }
  }
  const RAImage& x = seq.frames[idx];
  fs::create_directories(o.out);

  std::ostringstream table;
  table << "frame " << idx << "\n";
  table << "percentile        tau  gated_area  closed_area  lump_area  lump_bbox           hit\n";
  std::size_t prev_area = x.size() + 1;
  bool monotone = true;
  for (double p : ps) {
    LumpParams lp = o.lump;
    lp.percentile = p;
    const double tau = percentile_threshold(x, p);
    const BinaryMask raw = gate_mask(x, tau);
    const BinaryMask gated = binary_closing(raw, lp.closing_se);
    const Detection det = detect_lump(x, lp);
    const std::size_t area = mask_area(gated);
    monotone = monotone && area <= prev_area;
    prev_area = area;
    char tag[32];
    std::snprintf(tag, sizeof tag, "%g", p);
    export_image(gated, fs::path(o.out) / ("mask_p" + std::string(tag) + ".pgm"), ImageFormat::pgm16);
    export_image(det.mask, fs::path(o.out) / ("lump_p" + std::string(tag) + ".pgm"), ImageFormat::pgm16);
    char line[160];
    std::string box = "-";
    if (det.bbox)
      box = "r" + std::to_string(det.bbox->row_min) + "-" + std::to_string(det.bbox->row_max) +
            " c" + std::to_string(det.bbox->col_min) + "-" + std::to_string(det.bbox->col_max);
    std::string hit = "-";
    if (seq.truths && idx < seq.truths->size()) hit = hit_test(det, (*seq.truths)[idx]) ? "yes" : "no";
    std::snprintf(line, sizeof line, "%10g %10.5f %11zu %12zu %10zu  %-18s  %s\n", p, tau,
                  mask_area(raw), area, mask_area(det.mask), box.c_str(), hit.c_str());
    table << line;
  }
  export_image(x, fs::path(o.out) / "ra.pgm", ImageFormat::pgm16);
  write_bytes(fs::path(o.out) / "ablation.txt", table.str());
  std::cout << table.str();
  if (!monotone) {
    std::cerr << "error: closed mask area increased with percentile\n";
    return kExitCheckFailed;
  }
  return 0;
}

int cmd_bench(Options& o) {
  finalize(o);
  const auto names = resolve_detectors(o);
  std::vector<NamedDetector> detectors;
  for (const auto& n : names) detectors.push_back(make_detector(n, o.cfar, o.lump));
  if (o.repeats < 1) throw DomainError("--repeats must be >= 1");
  const RaSequence seq = load_source(o, o.inputs.at(0));
  if (seq.truths && seq.truths->size() != seq.frames.size())
    throw FormatError("ground truth length differs from frame count");
  BenchOptions opts{o.warmup, o.repeats, o.baseline};
  const std::vector<GroundTruth> no_truth;
  const auto summaries = benchmark_detectors(
      seq.frames, detectors, opts,
      seq.truths ? std::span<const GroundTruth>(*seq.truths) : std::span<const GroundTruth>(no_truth));
  const std::string table = format_table(summaries, o.baseline);
  std::cout << table;
  fs::create_directories(o.out);
  nlohmann::json doc = to_json(summaries, o.baseline);
  doc["warmup"] = o.warmup;
  doc["repeats"] = o.repeats;
  doc["frames"] = seq.frames.size();
  write_bytes(fs::path(o.out) / "bench_summary.json", doc.dump(2) + "\n");
  write_bytes(fs::path(o.out) / "bench_table.txt", table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FMCW range-azimuth presence detection toolkit"};
  app.footer(kDefaultsTable);
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "IQ cubes -> RA maps -> detectors");
  run->add_option("inputs", o.inputs, "cube file(s)")->required();
  run->add_option("-d,--detector,--detectors", o.detectors, "ca, os, lump, all (comma list)");
  add_cfar_flags(run, o);
  add_lump_flags(run, o);
  add_front_end_flags(run, o);
  run->add_option("-o,--out", o.out, "output directory");
  run->add_option("--export", o.exports, "ra, masks, records, summary (comma list)");
  run->add_option("--gt", o.gt_path, "ground-truth JSON lines for hit scoring");
  run->add_flag("--time-pipeline", o.time_pipeline, "also report front-end latency");

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("config", o.inputs, "scenario file")->required()->expected(1);
  synth->add_option("-o,--out", o.out, "cube path (iq) or directory (ra)")->required();
  synth->add_option("--seed", o.seed, "override the scenario seed");

  auto* ablate = app.add_subcommand("ablate", "percentile gate ablation on one frame");
  ablate->add_option("input", o.inputs, "cube, RA directory, or scenario")->required()->expected(1);
  ablate->add_option("-p,--percentile,--percentiles", o.percentiles, "percentile list")->delimiter(',');
  ablate->add_option("--frame", o.frame, "frame index (default: first non-zero)");
  ablate->add_option("--min-area", o.lump.min_area, "minimum blob area in pixels");
  ablate->add_option("--closing-se", o.lump.closing_se, "closing element edge length");
  ablate->add_option("--connectivity", o.connectivity, "4 or 8");
  add_front_end_flags(ablate, o);
  ablate->add_option("-o,--out", o.out, "output directory");
  ablate->add_option("--gt", o.gt_path, "ground-truth JSON lines");
  ablate->add_option("--seed", o.seed, "override the scenario seed");

  auto* bench = app.add_subcommand("bench", "detector-only latency benchmark");
  bench->add_option("input", o.inputs, "cube, RA directory, or scenario")->required()->expected(1);
  bench->add_option("-d,--detector,--detectors", o.detectors, "ca, os, lump, all (comma list)");
  add_cfar_flags(bench, o);
  add_lump_flags(bench, o);
  add_front_end_flags(bench, o);
  bench->add_option("--warmup", o.warmup, "discarded warmup calls per detector");
  bench->add_option("--repeats", o.repeats, "timed passes over the sequence");
  bench->add_option("--baseline", o.baseline, "detector used for speedup ratios");
  bench->add_option("-o,--out", o.out, "output directory");
  bench->add_option("--gt", o.gt_path, "ground-truth JSON lines");
  bench->add_option("--seed", o.seed, "override the scenario seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(o);
    if (*synth) return cmd_synth(o);
    if (*ablate) return cmd_ablate(o);
    if (*bench) return cmd_bench(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: scenario config: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const Error& e) {
    std::cerr << "error: bad input: " << e.what() << "\n";
    return kExitBadFile;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
