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

#include "attreval/stats.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "test_util.hpp"

namespace attreval {
namespace {

using testutil::CodeOf;

// Random differences with deliberate ties and zeros.
std::vector<double> TiedDiffs(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> d(n);
  const int levels = 1 + static_cast<int>(rng() % 6);
  for (auto& x : d) {
    const double mag = 1.0 + static_cast<double>(rng() % levels);
    const int sign = static_cast<int>(rng() % 7);
    x = sign == 0 ? 0.0 : (sign % 2 ? mag : -mag);
  }
  return d;
}

TEST(AbsRanksTest, TiesShareMeanRank) {
  const std::vector<double> v = {-3, 1, 1, 2, -1};
  EXPECT_EQ(AbsRanks(v), (std::vector<double>{5, 2, 2, 4, 2}));
}

TEST(WilcoxonTest, KnownValues) {
  const std::vector<double> up = {1, 2, 3, 4, 5};
  const auto r = WilcoxonSignedRank(up);
  EXPECT_EQ(r.w_plus, 15.0);
  EXPECT_NEAR(r.p_value, 0.0625, 1e-12);
  EXPECT_EQ(r.method, WilcoxonMethod::kExact);

  const std::vector<double> balanced = {1, -1, 2, -2, 3, -3};
  EXPECT_NEAR(WilcoxonSignedRank(balanced).p_value, 1.0, 1e-12);
}

TEST(WilcoxonTest, ZerosAreDroppedAndCounted) {
  const std::vector<double> d = {0, 1, 2, 0, 3, 4, 5};
  const auto r = WilcoxonSignedRank(d);
  EXPECT_EQ(r.n_used, 5u);
  EXPECT_EQ(r.n_zero_dropped, 2u);
  EXPECT_NEAR(r.p_value, 0.0625, 1e-12);
}

TEST(WilcoxonTest, DegenerateAndSmallSamples) {
  const std::vector<double> zeros(10, 0.0);
  EXPECT_EQ(CodeOf([&] { WilcoxonSignedRank(zeros); }), ErrorCode::kDegenerateSample);
  const std::vector<double> four = {1, 2, 0, 3, 4};
  EXPECT_EQ(CodeOf([&] { WilcoxonSignedRank(four); }), ErrorCode::kInsufficientData);
}

TEST(WilcoxonTest, ExactMatchesEnumerationForSmallN) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> d = TiedDiffs(rng, n);
      std::vector<double> nz;
      for (double x : d) {
        if (x != 0.0) nz.push_back(x);
      }
      if (nz.empty()) continue;
      const auto expected = oracle::EnumerateSignedRank(d);
      const auto ranks = AbsRanks(nz);
      double w = 0;
      for (std::size_t i = 0; i < nz.size(); ++i) {
        if (nz[i] > 0) w += ranks[i];
      }
      EXPECT_EQ(w, expected.w_plus);
      EXPECT_NEAR(ExactSignedRankPValue(ranks, w), expected.p_value, 1e-12);
    }
  }
}

TEST(WilcoxonTest, SwappingOrderKeepsPValue) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    auto d = TiedDiffs(rng, 8 + rng() % 30);
    std::size_t nz = 0;
    for (double x : d) nz += x != 0.0;
    if (nz < kMinWilcoxonPairs) continue;
    const auto a = WilcoxonSignedRank(d);
    for (auto& x : d) x = -x;
    const auto b = WilcoxonSignedRank(d);
    EXPECT_NEAR(a.p_value, b.p_value, 1e-12);
    EXPECT_GE(a.p_value, 0.0);
    EXPECT_LE(a.p_value, 1.0);
  }
}

TEST(WilcoxonTest, NormalApproximationTracksExactAtFifteen) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> nd(0.3, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> d(15);
    for (auto& x : d) x = nd(rng);
    const auto ranks = AbsRanks(d);
    double w = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] > 0) w += ranks[i];
    }
    EXPECT_NEAR(NormalSignedRankPValue(ranks, w), ExactSignedRankPValue(ranks, w), 0.02);
  }
}

TEST(WilcoxonTest, LargeSamplesUseNormalApproximation) {
  std::vector<double> d(40);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (i % 3 == 0 ? -1.0 : 1.0) * (i + 1);
  const auto r = WilcoxonSignedRank(d);
  EXPECT_EQ(r.method, WilcoxonMethod::kNormal);
  EXPECT_EQ(r.n_used, 40u);
}

TEST(WilcoxonTest, AgreesWithSignFlipPermutation) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd(0.2, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> d(40);
    for (auto& x : d) x = nd(rng);
    const double p = WilcoxonSignedRank(d).p_value;
    const double perm = oracle::SignFlipPermutationP(d, 100000, 1000 + trial);
    EXPECT_NEAR(p, perm, 0.01) << "trial " << trial;
  }
}

TEST(HolmTest, KnownExample) {
  const std::vector<double> p = {0.01, 0.04, 0.03};
  const auto h = HolmBonferroni(p, 0.05);
  EXPECT_NEAR(h.adjusted[0], 0.03, 1e-15);
  EXPECT_NEAR(h.adjusted[1], 0.06, 1e-15);
  EXPECT_NEAR(h.adjusted[2], 0.06, 1e-15);
  EXPECT_EQ(h.reject, (std::vector<bool>{true, false, false}));
}

TEST(HolmTest, MatchesStepDownDefinition) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 0.2);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> p(1 + rng() % 30);
    for (auto& x : p) x = rng() % 5 == 0 ? 0.001 * (rng() % 3) : u(rng);
    const auto h = HolmBonferroni(p, 0.05);
    const auto o = oracle::Holm(p, 0.05);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_NEAR(h.adjusted[i], o.adjusted[i], 1e-15);
      EXPECT_GE(h.adjusted[i], p[i]);
      EXPECT_LE(h.adjusted[i], 1.0);
    }
    EXPECT_EQ(h.reject, o.reject);
  }
}

TEST(HolmTest, RejectsBadInput) {
  const std::vector<double> bad = {0.1, 1.5};
  EXPECT_EQ(CodeOf([&] { HolmBonferroni(bad, 0.05); }), ErrorCode::kDomain);
  EXPECT_EQ(CodeOf([] { HolmBonferroni({}, 0.05); }), ErrorCode::kDomain);
}

TEST(SummaryTest, MedianMeanStd) {
  const std::vector<double> odd = {3, 1, 2};
  const std::vector<double> even = {4, 1, 3, 2};
  EXPECT_EQ(Median(odd), 2.0);
  EXPECT_EQ(Median(even), 2.5);
  EXPECT_EQ(Mean(even), 2.5);
  const std::vector<double> pair = {0.2, 0.4};
  EXPECT_NEAR(SampleStd(pair), 0.1414213562373095, 1e-12);
  const std::vector<double> one = {1.0};
  EXPECT_EQ(SampleStd(one), 0.0);
}

TEST(CiTest, HalfWidthsForFiveHundredScores) {
  EXPECT_NEAR(NormalCiHalfWidth(0.1137, 500), 0.00996606, 1e-8);
  EXPECT_NEAR(NormalCiHalfWidth(0.0596, 500), 0.00522407, 1e-8);
  EXPECT_NEAR(NormalQuantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_EQ(CodeOf([] { NormalCiHalfWidth(0.1, 1); }), ErrorCode::kInsufficientData);
}

TEST(PairwiseTest, SevenMethodsGiveTwentyOneTests) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u;
  std::map<std::string, std::vector<double>> scores;
  for (const char* m : {"g", "a", "f", "b", "e", "c", "d"}) {
    auto& s = scores[m];
    for (int i = 0; i < 30; ++i) s.push_back(u(rng));
  }
  const auto fam = RunPairwiseFamily(scores, 0.05);
  ASSERT_EQ(fam.size(), 21u);
  EXPECT_EQ(fam.front().label_a, "a");
  EXPECT_EQ(fam.front().label_b, "b");
  EXPECT_EQ(fam.back().label_a, "f");
  EXPECT_EQ(fam.back().label_b, "g");
  for (const auto& t : fam) EXPECT_LT(t.label_a, t.label_b);
}

TEST(PairwiseTest, IdenticalListsAreDegenerate) {
  std::map<std::string, std::vector<double>> scores = {
      {"x", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}},
      {"y", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}},
      {"z", {0.9, 0.8, 0.7, 0.9, 0.8, 0.7}}};
  const auto fam = RunPairwiseFamily(scores, 0.05);
  ASSERT_EQ(fam.size(), 3u);
  EXPECT_TRUE(fam[0].degenerate);
  EXPECT_EQ(fam[0].p_raw, 1.0);
  EXPECT_FALSE(fam[0].significant);
  EXPECT_EQ(fam[0].n_zero_dropped, 6u);
  EXPECT_FALSE(fam[1].degenerate);
  EXPECT_LT(fam[1].effect_size, 0.0);
}

TEST(PairwiseTest, MisalignedScoresAreRejected) {
  std::map<std::string, std::vector<double>> scores = {{"x", {1, 2, 3}}, {"y", {1, 2}}};
  EXPECT_EQ(CodeOf([&] { RunPairwiseFamily(scores, 0.05); }), ErrorCode::kValidation);
}

TEST(PairwiseTest, FamilyWiseErrorIsControlledUnderGlobalNull) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> nd;
  const int families = 400;
  int any = 0;
  for (int f = 0; f < families; ++f) {
    std::map<std::string, std::vector<double>> scores;
    for (int m = 0; m < 7; ++m) {
      auto& s = scores["m" + std::to_string(m)];
      for (int i = 0; i < 30; ++i) s.push_back(nd(rng));
    }
    const auto fam = RunPairwiseFamily(scores, 0.05);
    bool hit = false;
    for (const auto& t : fam) hit = hit || t.significant;
    any += hit;
  }
  const double rate = static_cast<double>(any) / families;
  EXPECT_LE(rate, 0.05 + 3 * std::sqrt(0.05 * 0.95 / families));
}

}  // namespace
}  // namespace attreval
