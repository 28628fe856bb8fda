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

#include "attreval/stratify.hpp"

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "reference_tables.hpp"
#include "test_util.hpp"

namespace attreval {
namespace {

using testutil::CodeOf;

std::string Id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "img_%04d", i);
  return buf;
}

TEST(PercentileTest, OneToHundred) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  EXPECT_NEAR(Percentile(v, 33), 33.67, 1e-9);
  EXPECT_NEAR(Percentile(v, 67), 67.33, 1e-9);
  EXPECT_EQ(Percentile(v, 0), 1.0);
  EXPECT_EQ(Percentile(v, 100), 100.0);
}

TEST(PercentileTest, MatchesOracleOnRandomSamples) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1000);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(1 + rng() % 50);
    for (auto& x : v) x = u(rng);
    for (double q : {0.0, 33.0, 50.0, 67.0, 100.0}) {
      EXPECT_NEAR(Percentile(v, q), oracle::Percentile(v, q), 1e-9);
    }
  }
}

TEST(StrataTest, PercentileBoundsPartitionImages) {
  std::map<std::string, std::uint64_t> sizes;
  for (int i = 1; i <= 100; ++i) sizes[Id(i)] = static_cast<std::uint64_t>(i);
  const auto s = ComputeStrata(sizes);
  ASSERT_EQ(s.strata.size(), 3u);
  EXPECT_EQ(s.strata[0].image_ids.size(), 33u);
  EXPECT_EQ(s.strata[1].image_ids.size(), 34u);
  EXPECT_EQ(s.strata[2].image_ids.size(), 33u);
  std::set<std::string> seen;
  for (const auto& st : s.strata) {
    for (const auto& id : st.image_ids) EXPECT_TRUE(seen.insert(id).second);
  }
  EXPECT_EQ(seen.size(), sizes.size());
  EXPECT_FALSE(s.degenerate);
}

TEST(StrataTest, EqualSizesAreDegenerateAndLandInLarge) {
  std::map<std::string, std::uint64_t> sizes;
  for (int i = 0; i < 10; ++i) sizes[Id(i)] = 500;
  const auto s = ComputeStrata(sizes);
  EXPECT_TRUE(s.degenerate);
  EXPECT_TRUE(s.strata[0].image_ids.empty());
  EXPECT_TRUE(s.strata[1].image_ids.empty());
  EXPECT_EQ(s.strata[2].image_ids.size(), 10u);
}

TEST(StrataTest, ExplicitBoundsOverridePercentiles) {
  const std::map<std::string, std::uint64_t> sizes = {
      {"a", 1000}, {"b", 40956}, {"c", 40957}, {"d", 84879}, {"e", 84880}, {"f", 200000}};
  const auto s = ComputeStrata(sizes, StrataBounds{40956, 84880});
  EXPECT_TRUE(s.explicit_bounds);
  EXPECT_EQ(s.strata[0].image_ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(s.strata[1].image_ids, (std::vector<std::string>{"c", "d"}));
  EXPECT_EQ(s.strata[2].image_ids, (std::vector<std::string>{"e", "f"}));
  EXPECT_EQ(CodeOf([&] { ComputeStrata(sizes, StrataBounds{10, 5}); }), ErrorCode::kDomain);
}

TEST(StrataTest, AssignmentIgnoresInsertionOrder) {
  std::mt19937_64 rng(9);
  std::vector<std::pair<std::string, std::uint64_t>> items;
  for (int i = 0; i < 60; ++i) items.emplace_back(Id(i), 100 + rng() % 50);
  std::map<std::string, std::uint64_t> a(items.begin(), items.end());
  std::shuffle(items.begin(), items.end(), rng);
  std::map<std::string, std::uint64_t> b;
  for (const auto& [k, v] : items) b.emplace(k, v);
  const auto sa = ComputeStrata(a);
  const auto sb = ComputeStrata(b);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(sa.strata[k].image_ids, sb.strata[k].image_ids);
}

TEST(ImprovementTest, ReproducesPrintedColumn) {
  for (const auto& row : reftables::SizeRows()) {
    const auto imp = ImprovementPercent(row.small, row.large);
    ASSERT_TRUE(imp.has_value());
    EXPECT_NEAR(*imp, row.improvement, 5.0) << row.method;
  }
  EXPECT_FALSE(ImprovementPercent(0.0, 0.5).has_value());
  EXPECT_FALSE(ImprovementPercent(std::nullopt, 0.5).has_value());
}

TEST(StratifiedPerformanceTest, MeansStdsAndSlope) {
  const std::map<std::string, std::uint64_t> sizes = {
      {"a", 1}, {"b", 2}, {"c", 5}, {"d", 6}, {"e", 9}, {"f", 10}};
  const auto strata = ComputeStrata(sizes, StrataBounds{2, 9});
  const std::map<std::string, double> scores = {
      {"a", 0.1}, {"b", 0.3}, {"c", 0.4}, {"d", 0.4}, {"e", 0.5}, {"f", 0.7}};
  const auto r = StratifiedPerformance("m", scores, strata);
  ASSERT_EQ(r.strata.size(), 3u);
  EXPECT_NEAR(*r.strata[0].mean, 0.2, 1e-12);
  EXPECT_NEAR(*r.strata[1].mean, 0.4, 1e-12);
  EXPECT_NEAR(*r.strata[2].mean, 0.6, 1e-12);
  EXPECT_NEAR(*r.strata[0].std, 0.1414213562373095, 1e-12);
  EXPECT_NEAR(*r.improvement, 200.0, 1e-9);
  EXPECT_NEAR(*StratumTrendSlope(r), 0.2, 1e-12);
}

TEST(StratifiedPerformanceTest, EmptySmallStratumLeavesImprovementUndefined) {
  std::map<std::string, std::uint64_t> sizes;
  for (int i = 0; i < 4; ++i) sizes[Id(i)] = 7;
  const auto strata = ComputeStrata(sizes);
  std::map<std::string, double> scores;
  for (int i = 0; i < 4; ++i) scores[Id(i)] = 0.5;
  const auto r = StratifiedPerformance("m", scores, strata);
  EXPECT_EQ(r.strata[0].n, 0u);
  EXPECT_FALSE(r.strata[0].mean.has_value());
  EXPECT_FALSE(r.improvement.has_value());
}

TEST(StratifiedPerformanceTest, UnknownImageIsRejected) {
  const auto strata = ComputeStrata({{"a", 1}, {"b", 2}});
  EXPECT_EQ(CodeOf([&] { StratifiedPerformance("m", {{"zzz", 0.1}}, strata); }),
            ErrorCode::kValidation);
}

}  // namespace
}  // namespace attreval
