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
 * \file pipeline.hpp
 * \brief Stream wrapper: IQ frame -> RD map -> MTI -> Capon RA image, plus
 *        the three detectors exposed under their short names.
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ra_sentinel/beamform.hpp"
#include "ra_sentinel/cfar.hpp"
#include "ra_sentinel/eval.hpp"
#include "ra_sentinel/lump.hpp"
#include "ra_sentinel/rd_pipeline.hpp"

namespace ra_sentinel {

/// Stateful per-stream front end. Not shareable across threads.
class RaPipeline {
 public:
  RaPipeline(RadarConfig config, WindowKind window, double mti_alpha)
      : config_((config.validate(), config)),
        window_(window),
        table_(build_steering_table(config_)),
        mti_(mti_alpha) {}

  const RadarConfig& config() const { return config_; }
  const SteeringTable& steering() const { return table_; }

  RangeDopplerMap range_doppler(const FrameCube& frame) {
    return mti_.filter(range_doppler_transform(frame, config_, window_));
  }

  /// MTI step alone, for callers that compute transforms out of order.
  RangeDopplerMap suppress_clutter(const RangeDopplerMap& rd) {
    return mti_.filter(rd);
  }

  RAImage process(const FrameCube& frame) {
    return build_ra_image(range_doppler(frame), table_, config_);
  }

 private:
  RadarConfig config_;
  WindowKind window_;
  SteeringTable table_;
  MtiState mti_;
};

inline const std::vector<std::string>& detector_names() {
  static const std::vector<std::string> names{"ca", "os", "lump"};
  return names;
}

inline NamedDetector make_detector(std::string_view name, const CfarParams& cfar,
                                   const LumpParams& lump) {
  if (name == "ca")
    return {"ca", [cfar](const RAImage& x) { return ca_cfar_2d(x, cfar); }};
  if (name == "os")
    return {"os", [cfar](const RAImage& x) { return os_cfar_2d(x, cfar); }};
  if (name == "lump")
    return {"lump", [lump](const RAImage& x) { return detect_lump(x, lump).mask; }};
  throw DomainError("unknown detector: " + std::string(name));
}

}  // namespace ra_sentinel
