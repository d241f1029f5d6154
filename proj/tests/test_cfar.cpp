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

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ra_sentinel/cfar.hpp"
#include "ra_sentinel/rng.hpp"

using namespace ra_sentinel;

namespace {

CfarParams params(std::size_t r, std::size_t g, double p_fa, double rank = 0.75,
                  std::optional<double> os_scale = std::nullopt) {
  CfarParams p;
  p.ref_band = r;
  p.guard_band = g;
  p.p_fa = p_fa;
  p.os_rank_fraction = rank;
  p.os_scale = os_scale;
  return p;
}

/// Amplitude image whose power is i.i.d. exponential with the given mean.
RAImage exponential_power_image(std::size_t rows, std::size_t cols, Xoshiro256& rng,
                                double mean = 1.0) {
  RAImage img(rows, cols);
  for (auto& v : img.values()) v = std::sqrt(mean * rng.exponential());
  return img;
}

BinaryMask brute_force_ca(const RAImage& x, const CfarParams& p) {
  BinaryMask m(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const auto ring = oracle::ring_powers(x, i, j, p.ref_band, p.guard_band);
      if (ring.empty()) continue;
      long double sum = 0;
      for (double v : ring) sum += v;
      const double mean = static_cast<double>(sum / ring.size());
      m(i, j) = x(i, j) * x(i, j) > cfar_scale_factor(ring.size(), p.p_fa) * mean;
    }
  return m;
}

BinaryMask brute_force_os(const RAImage& x, const CfarParams& p) {
  BinaryMask m(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      auto ring = oracle::ring_powers(x, i, j, p.ref_band, p.guard_band);
      if (ring.empty()) continue;
      std::sort(ring.begin(), ring.end(), std::greater<>());
      const std::size_t k = os_rank(ring.size(), p.os_rank_fraction);
      const double alpha =
          p.os_scale ? *p.os_scale : os_scale_factor(ring.size(), k, p.p_fa);
      m(i, j) = x(i, j) * x(i, j) > alpha * ring[k - 1];
    }
  return m;
}

std::size_t count_interior(const BinaryMask& m, std::size_t margin) {
  std::size_t n = 0;
  for (std::size_t i = margin; i + margin < m.rows(); ++i)
    for (std::size_t j = margin; j + margin < m.cols(); ++j) n += m(i, j);
  return n;
}

}  // namespace

TEST(CfarScale, KnownValues) {
  // mu = N (p^(-1/N) - 1); 16 * (0.01^(-1/16) - 1) to 16 digits.
  EXPECT_NEAR(cfar_scale_factor(16, 0.01), 5.336342914613184, 1e-12);
  EXPECT_NEAR(cfar_scale_factor(1, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(cfar_scale_factor(2, 0.25), 2.0, 1e-14);
}

TEST(CfarScale, ApproachesLogLimitForLargeN) {
  const double limit = -std::log(1e-3);
  double prev = cfar_scale_factor(1, 1e-3);
  for (std::size_t n : {4u, 16u, 64u, 256u, 4096u, 1u << 20}) {
    const double mu = cfar_scale_factor(n, 1e-3);
    EXPECT_LT(mu, prev);
    EXPECT_GT(mu, limit);
    prev = mu;
  }
  EXPECT_NEAR(prev, limit, 1e-4);
}

TEST(CfarScale, RejectsBadArguments) {
  EXPECT_THROW(cfar_scale_factor(0, 0.1), DomainError);
  EXPECT_THROW(cfar_scale_factor(4, 0.0), DomainError);
  EXPECT_THROW(cfar_scale_factor(4, 1.0), DomainError);
}

TEST(CfarParams, Validation) {
  CfarParams p;
  EXPECT_NO_THROW(p.validate());
  p.guard_band = 8;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.p_fa = 1.5;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.os_rank_fraction = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  const RAImage img(8, 8);
  p = {};
  p.guard_band = 9;
  EXPECT_THROW(ca_cfar_2d(img, p), DomainError);
  EXPECT_THROW(os_cfar_2d(img, p), DomainError);
}

TEST(ReferenceCells, InteriorCountAndBorderClipping) {
  const CfarParams p;  // r=8, g=2
  EXPECT_EQ(reference_cells(64, 256, {32, 128}, p).size(), 17u * 17 - 5 * 5);
  EXPECT_EQ(reference_cells(64, 256, {0, 0}, p).size(), 9u * 9 - 3 * 3);
  const CfarParams small = params(2, 1, 1e-3);
  EXPECT_EQ(reference_cells(10, 10, {5, 5}, small).size(), 16u);
  for (const Pixel& c : reference_cells(10, 10, {5, 5}, small)) {
    const std::size_t d = std::max(c.row > 5 ? c.row - 5 : 5 - c.row,
                                   c.col > 5 ? c.col - 5 : 5 - c.col);
    EXPECT_EQ(d, 2u);
  }
  EXPECT_THROW(reference_cells(4, 4, {4, 0}, p), DimensionError);
}

TEST(OsRank, Rounding) {
  EXPECT_EQ(os_rank(264, 0.75), 198u);
  EXPECT_EQ(os_rank(16, 0.75), 12u);
  EXPECT_EQ(os_rank(1, 0.75), 1u);
  EXPECT_EQ(os_rank(3, 0.1), 1u);
  EXPECT_EQ(os_rank(10, 1.0), 10u);
}

TEST(OsScale, ClosedFormInvertsAndMatchesDefault) {
  const double a = os_scale_factor(264, 198, 1e-3);
  EXPECT_NEAR(a, kDefaultOsScale, 1e-8);
  EXPECT_NEAR(os_false_alarm(264, 198, a), 1e-3, 1e-12);
  // k = N uses the minimum reference: P_fa = N / (N + alpha).
  EXPECT_NEAR(os_scale_factor(8, 8, 0.2), 32.0, 1e-8);
  // k = 1 uses the maximum; N = 1 collapses to CA.
  EXPECT_NEAR(os_scale_factor(1, 1, 0.01), cfar_scale_factor(1, 0.01), 1e-8);
  EXPECT_THROW(os_scale_factor(8, 9, 0.1), DomainError);
}

TEST(OsScale, MonteCarloFalseAlarmOfDefaultScale) {
  // Independent of the closed form: draw N=264 exponential references, take
  // the 198th largest, and count CUT exceedances.
  Xoshiro256 rng(2024);
  constexpr int kTrials = 400000;
  std::vector<double> refs(264);
  int hits = 0;
  for (int t = 0; t < kTrials; ++t) {
    for (double& v : refs) v = rng.exponential();
    std::nth_element(refs.begin(), refs.begin() + 197, refs.end(), std::greater<>());
    hits += rng.exponential() > kDefaultOsScale * refs[197];
  }
  const double pfa = double(hits) / kTrials;
  EXPECT_NEAR(pfa, 1e-3, 0.15e-3);
}

TEST(CaCfar, MatchesBruteForce) {
  Xoshiro256 rng(5);
  for (const CfarParams& p : {params(2, 1, 1e-2), params(3, 0, 1e-3),
                              params(4, 2, 0.05), params(8, 2, 1e-3)}) {
    const RAImage img = exponential_power_image(19, 23, rng);
    const BinaryMask got = ca_cfar_2d(img, p);
    const BinaryMask want = brute_force_ca(img, p);
    ASSERT_EQ(got, want) << "r=" << p.ref_band << " g=" << p.guard_band;
  }
}

TEST(OsCfar, MatchesBruteForce) {
  Xoshiro256 rng(6);
  const std::vector<CfarParams> cases{params(2, 1, 1e-2), params(3, 1, 0.05, 0.5),
                                      params(4, 2, 1e-3), params(2, 0, 1e-2, 0.75, 3.0)};
  for (const CfarParams& p : cases) {
    const RAImage img = exponential_power_image(17, 21, rng);
    ASSERT_EQ(os_cfar_2d(img, p), brute_force_os(img, p)) << "r=" << p.ref_band;
  }
}

TEST(CaCfar, ZeroImageHasNoDetections) {
  const RAImage img(16, 16);
  EXPECT_EQ(mask_area(ca_cfar_2d(img, {})), 0u);
  EXPECT_EQ(mask_area(os_cfar_2d(img, {})), 0u);
}

TEST(CaCfar, EmptyImageThrows) {
  EXPECT_THROW(ca_cfar_2d(RAImage{}, {}), DimensionError);
  EXPECT_THROW(os_cfar_2d(RAImage{}, {}), DimensionError);
}

TEST(CaCfar, IsolatedSpikeDetected) {
  RAImage img(32, 32, 0.1);
  img(16, 16) = 1.0;
  const BinaryMask ca = ca_cfar_2d(img, {});
  const BinaryMask os = os_cfar_2d(img, {});
  EXPECT_EQ(mask_area(ca), 1u);
  EXPECT_EQ(ca(16, 16), 1);
  EXPECT_EQ(mask_area(os), 1u);
  EXPECT_EQ(os(16, 16), 1);
}

TEST(Cfar, InvariantToPositiveScaling) {
  Xoshiro256 rng(8);
  const CfarParams p = params(4, 1, 1e-2);
  const RAImage img = exponential_power_image(24, 24, rng);
  const BinaryMask ca = ca_cfar_2d(img, p);
  const BinaryMask os = os_cfar_2d(img, p);
  for (double s : {0.25, 2.0, 1024.0, 1.0 / 65536.0}) {
    RAImage scaled = img;
    for (auto& v : scaled.values()) v *= s;
    EXPECT_EQ(ca_cfar_2d(scaled, p), ca);
    EXPECT_EQ(os_cfar_2d(scaled, p), os);
  }
}

TEST(CaCfar, MonteCarloFalseAlarmRate) {
  Xoshiro256 rng(99);
  const CfarParams p = params(2, 1, 1e-2);
  std::size_t hits = 0, cells = 0;
  for (int t = 0; t < 30; ++t) {
    const RAImage img = exponential_power_image(64, 256, rng);
    hits += count_interior(ca_cfar_2d(img, p), p.ref_band);
    cells += (64 - 4) * (256 - 4);
  }
  const double pfa = double(hits) / double(cells);
  EXPECT_GT(pfa, 0.5e-2);
  EXPECT_LT(pfa, 2e-2);
}

TEST(OsCfar, MonteCarloFalseAlarmRate) {
  Xoshiro256 rng(100);
  const CfarParams p = params(3, 1, 1e-2);
  std::size_t hits = 0, cells = 0;
  for (int t = 0; t < 10; ++t) {
    const RAImage img = exponential_power_image(64, 256, rng);
    hits += count_interior(os_cfar_2d(img, p), p.ref_band);
    cells += (64 - 6) * (256 - 6);
  }
  const double pfa = double(hits) / double(cells);
  EXPECT_GT(pfa, 0.5e-2);
  EXPECT_LT(pfa, 2e-2);
}

TEST(OsCfar, ThresholdUnchangedWhenLargestCellsGrow) {
  // Raising references that already sit at or above the k-th largest keeps
  // the k-th largest, hence the decision, unchanged.
  Xoshiro256 rng(12);
  const CfarParams p;
  for (int t = 0; t < 50; ++t) {
    RAImage img = exponential_power_image(17, 17, rng);
    img(8, 8) = std::sqrt(kDefaultOsScale) * 0.9 * img(0, 0);
    auto ring = oracle::ring_powers(img, 8, 8, p.ref_band, p.guard_band);
    std::sort(ring.begin(), ring.end(), std::greater<>());
    const double kth = ring[197];
    const BinaryMask before = os_cfar_2d(img, p);
    RAImage bumped = img;
    for (const Pixel& c : reference_cells(17, 17, {8, 8}, p))
      if (img(c.row, c.col) * img(c.row, c.col) > kth) bumped(c.row, c.col) *= 30.0;
    EXPECT_EQ(os_cfar_2d(bumped, p)(8, 8), before(8, 8));
  }
}

TEST(OsCfar, RobustToSingleInterfererWhereCaIsMasked) {
  RAImage img(17, 17, 0.1);
  img(8, 8) = 0.6;   // 36x background power
  img(0, 0) = 20.0;  // strong interferer in the ring
  const CfarParams p;
  EXPECT_EQ(os_cfar_2d(img, p)(8, 8), 1);
  EXPECT_EQ(ca_cfar_2d(img, p)(8, 8), 0);
}
