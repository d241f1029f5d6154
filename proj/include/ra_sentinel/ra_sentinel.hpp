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

/// Umbrella header.
#pragma once

#include "ra_sentinel/beamform.hpp"
#include "ra_sentinel/cfar.hpp"
#include "ra_sentinel/cube_io.hpp"
#include "ra_sentinel/error.hpp"
#include "ra_sentinel/eval.hpp"
#include "ra_sentinel/fft.hpp"
#include "ra_sentinel/lump.hpp"
#include "ra_sentinel/parallel.hpp"
#include "ra_sentinel/pipeline.hpp"
#include "ra_sentinel/rd_pipeline.hpp"
#include "ra_sentinel/rng.hpp"
#include "ra_sentinel/synth.hpp"
#include "ra_sentinel/types.hpp"
