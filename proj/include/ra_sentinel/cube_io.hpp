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
 * \file cube_io.hpp
 * \brief "RIQ1" IQ cube container, plus PGM16/CSV grid export.
 *
 * Cube layout: magic "RIQ1"; u32 LE num_frames, num_rx, num_chirps,
 * num_samples; then every frame rx-major, chirp-next, sample-innermost with
 * each sample stored as f32 I then f32 Q, little-endian, no padding.
 */
#pragma once

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include "ra_sentinel/error.hpp"
#include "ra_sentinel/types.hpp"

namespace ra_sentinel {

inline constexpr std::array<char, 4> kCubeMagic{'R', 'I', 'Q', '1'};
inline constexpr std::uint64_t kCubeHeaderBytes = 4 + 4 * 4;
inline constexpr std::uint64_t kBytesPerSample = 8;

struct CubeHeader {
  std::uint32_t num_frames = 0;
  CubeDims dims{};

  std::uint64_t frame_bytes() const {
    return static_cast<std::uint64_t>(dims.volume()) * kBytesPerSample;
  }
  std::uint64_t payload_bytes() const { return frame_bytes() * num_frames; }
};

namespace detail {

inline void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void put_f32(std::vector<char>& out, float f) {
  put_u32(out, std::bit_cast<std::uint32_t>(f));
}

inline float get_f32(const unsigned char* p) {
  return std::bit_cast<float>(get_u32(p));
}

inline std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) throw DomainError(std::string(what) + " exceeds u32");
  return static_cast<std::uint32_t>(v);
}

}  // namespace detail

/// Streams frames out of a cube file. The whole-file length is validated on
/// open, so next() never hits a short read on a well-formed header.
class CubeReader {
 public:
  explicit CubeReader(const std::filesystem::path& path)
      : in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open cube file: " + path.string());

    std::array<unsigned char, kCubeHeaderBytes> head{};
    in_.read(reinterpret_cast<char*>(head.data()), head.size());
    const auto got = static_cast<std::uint64_t>(in_.gcount());
    if (got < 4 || std::memcmp(head.data(), kCubeMagic.data(), 4) != 0)
      throw FormatError("bad magic, expected \"RIQ1\": " + path.string());
    if (got < kCubeHeaderBytes)
      throw CorruptionError("truncated cube header", got);

    header_.num_frames = detail::get_u32(head.data() + 4);
    header_.dims.num_rx = detail::get_u32(head.data() + 8);
    header_.dims.num_chirps = detail::get_u32(head.data() + 12);
    header_.dims.num_samples = detail::get_u32(head.data() + 16);

    std::error_code ec;
    const std::uint64_t file_size = std::filesystem::file_size(path, ec);
    if (ec) throw IoError("cannot stat cube file: " + path.string());
    const std::uint64_t expected = kCubeHeaderBytes + header_.payload_bytes();
    if (file_size < expected)
      throw CorruptionError("truncated cube payload: expected " +
                                std::to_string(expected) + " bytes",
                            file_size);
    if (file_size > expected)
      throw CorruptionError("trailing bytes after cube payload", expected);
  }

  const CubeHeader& header() const { return header_; }
  std::uint32_t frames_read() const { return frames_read_; }

  /// Reads the next frame into `out`; returns false once all are consumed.
  bool next(FrameCube& out) {
    if (frames_read_ >= header_.num_frames) return false;
    buffer_.resize(header_.frame_bytes());
    in_.read(reinterpret_cast<char*>(buffer_.data()),
             static_cast<std::streamsize>(buffer_.size()));
    if (static_cast<std::uint64_t>(in_.gcount()) != buffer_.size())
      throw CorruptionError(
          "short read in frame " + std::to_string(frames_read_),
          kCubeHeaderBytes + header_.frame_bytes() * frames_read_ +
              static_cast<std::uint64_t>(in_.gcount()));
    FrameCube frame(header_.dims);
    auto dst = frame.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      const unsigned char* p = buffer_.data() + i * kBytesPerSample;
      dst[i] = cfloat(detail::get_f32(p), detail::get_f32(p + 4));
    }
    out = std::move(frame);
    ++frames_read_;
    return true;
  }

 private:
  std::ifstream in_;
  CubeHeader header_{};
  std::uint32_t frames_read_ = 0;
  std::vector<unsigned char> buffer_;
};

struct CubeFile {
  CubeHeader header;
  std::vector<FrameCube> frames;
};

inline CubeFile read_cube_file(const std::filesystem::path& path) {
  CubeReader reader(path);
  CubeFile file{reader.header(), {}};
  file.frames.reserve(reader.header().num_frames);
  FrameCube frame;
  while (reader.next(frame)) file.frames.push_back(std::move(frame));
  return file;
}

inline std::vector<char> encode_cube(const CubeDims& dims,
                                     std::span<const FrameCube> frames) {
  std::vector<char> out;
  out.reserve(kCubeHeaderBytes + frames.size() * dims.volume() * kBytesPerSample);
  for (const char ch : kCubeMagic) out.push_back(ch);
  detail::put_u32(out, detail::checked_u32(frames.size(), "num_frames"));
  detail::put_u32(out, detail::checked_u32(dims.num_rx, "num_rx"));
  detail::put_u32(out, detail::checked_u32(dims.num_chirps, "num_chirps"));
  detail::put_u32(out, detail::checked_u32(dims.num_samples, "num_samples"));
  for (const auto& frame : frames) {
    if (!(frame.dims() == dims))
      throw DimensionError("frame dims differ from cube header dims");
    for (const cfloat& s : frame.samples()) {
      detail::put_f32(out, s.real());
      detail::put_f32(out, s.imag());
    }
  }
  return out;
}

inline void write_bytes(const std::filesystem::path& path,
                        std::span<const char> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

inline void write_cube_file(const std::filesystem::path& path,
                            const CubeDims& dims,
                            std::span<const FrameCube> frames) {
  write_bytes(path, encode_cube(dims, frames));
}

inline void write_cube_file(const std::filesystem::path& path,
                            const RadarConfig& config,
                            std::span<const FrameCube> frames) {
  write_cube_file(path, CubeDims::from(config), frames);
}

// ---------------------------------------------------------------------------
// Grid export

enum class ImageFormat { pgm16, csv };

/// Linear [0,1] -> [0,65535] with round-half-up; out-of-range values clamp.
inline std::uint16_t to_pgm_level(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 65535;
  return static_cast<std::uint16_t>(std::floor(v * 65535.0 + 0.5));
}

inline std::uint16_t to_pgm_level(std::uint8_t bit) { return bit ? 65535 : 0; }

namespace detail {

inline void append_number(std::string& out, double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

inline void append_number(std::string& out, std::uint8_t bit) {
  out.push_back(bit ? '1' : '0');
}

}  // namespace detail

template <typename T>
std::vector<char> encode_image(const Grid<T>& grid, ImageFormat format) {
  if (grid.empty()) throw DimensionError("cannot export an empty grid");
  std::vector<char> out;
  if (format == ImageFormat::pgm16) {
    const std::string head = "P5\n" + std::to_string(grid.cols()) + " " +
                             std::to_string(grid.rows()) + "\n65535\n";
    out.assign(head.begin(), head.end());
    out.reserve(head.size() + grid.size() * 2);
    for (const T& v : grid.values()) {
      const std::uint16_t level = to_pgm_level(v);
      out.push_back(static_cast<char>(level >> 8));  // PGM is big-endian
      out.push_back(static_cast<char>(level & 0xFFu));
    }
    return out;
  }
  std::string text;
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      if (c) text.push_back(',');
      detail::append_number(text, grid(r, c));
    }
    text.push_back('\n');
  }
  out.assign(text.begin(), text.end());
  return out;
}

template <typename T>
void export_image(const Grid<T>& grid, const std::filesystem::path& path,
                  ImageFormat format) {
  write_bytes(path, encode_image(grid, format));
}

/// Parses a binary PGM (8- or 16-bit) back into [0,1] intensities.
inline RAImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path.string());
  auto token = [&]() {
    std::string t;
    char ch = 0;
    while (in.get(ch)) {
      if (ch == '#') {
        std::string skip;
        std::getline(in, skip);
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        t.push_back(ch);
        break;
      }
    }
    while (in.get(ch) && !std::isspace(static_cast<unsigned char>(ch)))
      t.push_back(ch);
    return t;
  };
  if (token() != "P5") throw FormatError("not a binary PGM: " + path.string());
  std::size_t cols = 0, rows = 0, maxval = 0;
  try {
    cols = std::stoul(token());
    rows = std::stoul(token());
    maxval = std::stoul(token());
  } catch (const std::exception&) {
    throw FormatError("malformed PGM header: " + path.string());
  }
  if (maxval == 0 || maxval > 65535 || rows == 0 || cols == 0)
    throw FormatError("unsupported PGM header: " + path.string());
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(rows * cols * bytes_per);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw CorruptionError("truncated PGM raster",
                          static_cast<std::uint64_t>(in.gcount()));
  RAImage img(rows, cols);
  auto vals = img.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const unsigned level =
        bytes_per == 2 ? (unsigned(raw[2 * i]) << 8) | raw[2 * i + 1] : raw[i];
    vals[i] = static_cast<double>(level) / static_cast<double>(maxval);
  }
  return img;
}

}  // namespace ra_sentinel
