/* Copyright 2026 The attreval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "attreval/metrics.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"

namespace attreval {
namespace {

using testutil::CodeOf;

AttributionMap MakeMap(std::uint32_t h, std::uint32_t w, std::vector<double> v) {
  AttributionMap m;
  m.height = h;
  m.width = w;
  m.values = std::move(v);
  return m;
}

GroundTruthMask MakeMask(std::uint32_t h, std::uint32_t w, std::vector<std::uint8_t> b) {
  GroundTruthMask m;
  m.height = h;
  m.width = w;
  m.bits = std::move(b);
  return m;
}

// 4x4 map with values 0.1 * (1 + i % 10) and a 2x2 top-left lesion.
std::pair<AttributionMap, GroundTruthMask> FourByFour() {
  std::vector<double> v(16);
  for (int i = 0; i < 16; ++i) v[i] = 0.1 * (1 + i % 10);
  std::vector<std::uint8_t> b(16, 0);
  for (int i : {0, 1, 4, 5}) b[i] = 1;
  return {MakeMap(4, 4, v), MakeMask(4, 4, b)};
}

TEST(ThresholdGridTest, DefaultHasNineteenEvenSteps) {
  const auto g = ThresholdGrid::Default();
  ASSERT_EQ(g.size(), 19u);
  EXPECT_DOUBLE_EQ(g[0], 0.05);
  EXPECT_DOUBLE_EQ(g[18], 0.95);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(g[i], 0.05 * (i + 1), 1e-12);
  EXPECT_EQ(g.IndexOf(0.3), 5);
  EXPECT_EQ(g.IndexOf(0.5), 9);
  EXPECT_EQ(g.IndexOf(0.7), 13);
  EXPECT_EQ(g.IndexOf(0.33), -1);
}

TEST(ThresholdGridTest, ParseAndValidation) {
  const auto g = ThresholdGrid::Parse("0.1:0.9:9");
  ASSERT_EQ(g.size(), 9u);
  EXPECT_NEAR(g[4], 0.5, 1e-12);
  EXPECT_EQ(CodeOf([] { ThresholdGrid::Parse("0.1:0.9"); }), ErrorCode::kDomain);
  EXPECT_EQ(CodeOf([] { ThresholdGrid::Parse("0:0.9:5"); }), ErrorCode::kDomain);
  EXPECT_EQ(CodeOf([] { ThresholdGrid(std::vector<double>{0.5, 0.4}); }), ErrorCode::kDomain);
  EXPECT_EQ(CodeOf([] { ThresholdGrid(std::vector<double>{}); }), ErrorCode::kDomain);
}

TEST(NormalizeTest, MinMaxAndConstant) {
  const std::vector<double> v = {2.0, 4.0, 6.0};
  const auto n = Normalize(v);
  EXPECT_EQ(n, (std::vector<double>{0.0, 0.5, 1.0}));
  const std::vector<double> c = {3.0, 3.0, 3.0};
  EXPECT_EQ(Normalize(c), (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(BinarizeTest, InclusiveComparatorByDefault) {
  const std::vector<double> n = {0.0, 0.5, 0.7, 1.0};
  EXPECT_EQ(Binarize(n, 0.5), (std::vector<std::uint8_t>{0, 1, 1, 1}));
  EXPECT_EQ(Binarize(n, 0.5, Comparator::kGreater), (std::vector<std::uint8_t>{0, 0, 1, 1}));
  EXPECT_EQ(CodeOf([&] { Binarize(n, 1.0); }), ErrorCode::kDomain);
}

TEST(IoUTest, HandExamples) {
  const std::vector<std::uint8_t> p = {1, 1, 0, 0};
  const std::vector<std::uint8_t> t = {1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(IoU(p, t), 1.0 / 3.0);
  const std::vector<std::uint8_t> z = {0, 0, 0, 0};
  EXPECT_EQ(IoU(z, z), 1.0);
  EXPECT_EQ(IoU(z, t), 0.0);
  EXPECT_EQ(IoU(t, t), 1.0);
  const std::vector<std::uint8_t> shorter = {1};
  EXPECT_EQ(CodeOf([&] { IoU(shorter, t); }), ErrorCode::kValidation);
}

TEST(IoUTest, MatchesNaiveOracleOnRandomGrids) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t h = 1 + rng() % 8;
    const std::size_t w = 1 + rng() % 8;
    const double density = static_cast<double>(rng() % 5) / 4.0;
    std::bernoulli_distribution bit(density);
    std::vector<std::uint8_t> p(h * w);
    std::vector<std::uint8_t> t(h * w);
    std::vector<int> pi(h * w);
    std::vector<int> ti(h * w);
    for (std::size_t i = 0; i < h * w; ++i) {
      pi[i] = p[i] = bit(rng);
      ti[i] = t[i] = bit(rng);
    }
    EXPECT_EQ(IoU(p, t), oracle::NaiveIoU(pi, ti, h, w));
  }
}

TEST(AucTest, ConstantAndLinearCurves) {
  const auto g = ThresholdGrid::Default();
  for (double c : {0.0, 0.1, 1.0 / 3.0, 0.7, 1.0}) {
    std::vector<double> ious(g.size(), c);
    EXPECT_EQ(AucIoU(g.taus(), ious), c);
  }
  std::vector<double> lin;
  for (double t : g.taus()) lin.push_back(1.0 - (t - 0.05) / 0.9);
  EXPECT_NEAR(AucIoU(g.taus(), lin), 0.5, 1e-12);
}

TEST(AucTest, PiecewiseCurve) {
  // 1 on [0.05, 0.45], 0 from 0.5 on: area 0.4 + 0.025 over width 0.9.
  const auto g = ThresholdGrid::Default();
  std::vector<double> ious(g.size(), 0.0);
  for (std::size_t i = 0; i < 9; ++i) ious[i] = 1.0;
  EXPECT_NEAR(AucIoU(g.taus(), ious), 17.0 / 36.0, 1e-12);
  EXPECT_NEAR(TrapezoidIntegral(g.taus(), ious), 0.425, 1e-12);
}

TEST(IoUCurveTest, FrozenFourByFourFixture) {
  const auto [map, mask] = FourByFour();
  const auto curve = ComputeIoUCurve(map, mask, ThresholdGrid::Default());
  const std::vector<double> expected = {0.2,     0.2,     1.0 / 7, 1.0 / 7, 1.0 / 6,
                                        1.0 / 6, 0.2,     0.2,     1.0 / 9, 1.0 / 9,
                                        1.0 / 9, 0,       0,       0,       0,
                                        0,       0,       0,       0};
  ASSERT_EQ(curve.ious.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(curve.ious[i], expected[i], 1e-15) << "tau index " << i;
  }
  EXPECT_NEAR(curve.auc, 0.09179894179894181, 1e-12);
  EXPECT_NEAR(curve.auc_raw, 0.09179894179894181 * 0.9, 1e-12);
}

TEST(IoUCurveTest, MatchesBruteForceAndStaysInUnitRange) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto g = ThresholdGrid::Default();
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t h = 1 + rng() % 8;
    const std::uint32_t w = 1 + rng() % 8;
    std::vector<double> v(h * w);
    std::vector<std::uint8_t> b(h * w);
    std::vector<int> bi(h * w);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = u(rng);
      bi[i] = b[i] = rng() & 1;
    }
    const auto curve = ComputeIoUCurve(MakeMap(h, w, v), MakeMask(h, w, b), g);
    EXPECT_EQ(curve.ious, oracle::BruteForceCurve(v, bi, g.taus()));
    EXPECT_GE(curve.auc, 0.0);
    EXPECT_LE(curve.auc, 1.0);
  }
}

TEST(IoUCurveTest, PredictionsNestAsThresholdRises) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<double> v(64);
  for (auto& x : v) x = n(rng);
  const auto norm = Normalize(v);
  const auto g = ThresholdGrid::Default();
  for (std::size_t i = 1; i < g.size(); ++i) {
    const auto lo = Binarize(norm, g[i - 1]);
    const auto hi = Binarize(norm, g[i]);
    for (std::size_t k = 0; k < v.size(); ++k) EXPECT_LE(hi[k], lo[k]);
  }
}

TEST(IoUCurveTest, AffineTransformLeavesCurveUnchanged) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(49);
  std::vector<std::uint8_t> b(49);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = u(rng);
    b[i] = u(rng) < 0.3;
  }
  const auto mask = MakeMask(7, 7, b);
  const auto base = ComputeIoUCurve(MakeMap(7, 7, v), mask, ThresholdGrid::Default());
  for (double a : {0.001, 2.5, 1000.0}) {
    for (double shift : {-50.0, 0.0, 7.0}) {
      std::vector<double> t(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) t[i] = a * v[i] + shift;
      const auto c = ComputeIoUCurve(MakeMap(7, 7, t), mask, ThresholdGrid::Default());
      EXPECT_EQ(c.ious, base.ious);
      EXPECT_NEAR(c.auc, base.auc, 1e-12);
    }
  }
}

TEST(IoUCurveTest, PerfectAndConstantMaps) {
  const auto mask = MakeMask(2, 2, {1, 0, 0, 1});
  const auto perfect = ComputeIoUCurve(MakeMap(2, 2, {5, 1, 1, 5}), mask,
                                       ThresholdGrid::Default());
  EXPECT_EQ(perfect.auc, 1.0);
  // A constant map normalizes to zeros, so nothing is ever predicted.
  const auto flat = ComputeIoUCurve(MakeMap(2, 2, {2, 2, 2, 2}), mask,
                                    ThresholdGrid::Default());
  EXPECT_EQ(flat.auc, 0.0);
}

TEST(IoUCurveTest, DimensionMismatchIsValidationError) {
  const auto [map, mask] = FourByFour();
  const auto other = MakeMask(2, 8, mask.bits);
  EXPECT_EQ(CodeOf([&] { ComputeIoUCurve(map, other, ThresholdGrid::Default()); }),
            ErrorCode::kValidation);
}

}  // namespace
}  // namespace attreval
