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

#include "attreval/eval_engine.hpp"

#include <gtest/gtest.h>

#include "attreval/report.hpp"
#include "attreval/synthgen.hpp"
#include "test_util.hpp"

namespace attreval {
namespace {

using testutil::CodeOf;
using testutil::TempDir;

IoUCurve Flat(double v) {
  IoUCurve c;
  c.taus = ThresholdGrid::Default().taus();
  c.ious.assign(c.taus.size(), v);
  c.auc = AucIoU(c.taus, c.ious);
  return c;
}

class EngineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    manifest_path_ = GenerateStudy(DefaultStudySpec(11, 24), dir_.path());
  }
  TempDir dir_{"engine"};
  std::filesystem::path manifest_path_;
};

TEST(AggregateTest, MeanStdAndCi) {
  const auto r = AggregateMethod("m", {"b", "a"}, {Flat(0.4), Flat(0.2)});
  EXPECT_EQ(r.image_ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(r.per_image[0].auc, 0.2);
  EXPECT_NEAR(r.auc_mean, 0.3, 1e-15);
  EXPECT_NEAR(r.auc_std, 0.1414213562373095, 1e-12);
  EXPECT_FALSE(r.ci_degenerate);
  EXPECT_NEAR(r.per_tau_mean[3], 0.3, 1e-15);
}

TEST(AggregateTest, SingleImageHasDegenerateCi) {
  const auto r = AggregateMethod("m", {"a"}, {Flat(0.5)});
  EXPECT_EQ(r.auc_mean, 0.5);
  EXPECT_EQ(r.auc_std, 0.0);
  EXPECT_TRUE(r.ci_degenerate);
}

TEST_F(EngineTest, StructureOfSevenMethodStudy) {
  const auto result = EvaluateStudy(LoadManifest(manifest_path_), AnalysisConfig{});
  EXPECT_EQ(result.method_results.size(), 7u);
  EXPECT_EQ(result.pairwise.size(), 21u);
  EXPECT_EQ(CountBiasTests(result.bias_rows), 133u);
  EXPECT_EQ(result.strata.strata.size(), 3u);
  EXPECT_EQ(result.rankings.size(), 3u);
  const auto& perfect = result.Method("perfect");
  EXPECT_EQ(perfect.auc_mean, 1.0);
  EXPECT_EQ(perfect.auc_std, 0.0);
  EXPECT_EQ(result.Method("inverted").auc_mean, 0.0);
  EXPECT_EQ(result.seed, std::optional<std::uint64_t>(11));
}

TEST_F(EngineTest, MeansMatchDirectRecomputation) {
  const auto manifest = LoadManifest(manifest_path_);
  const auto result = EvaluateStudy(manifest, AnalysisConfig{});
  for (std::size_t m = 0; m < manifest.methods.size(); ++m) {
    double sum = 0;
    for (const auto& img : manifest.images) {
      const auto c = ComputeIoUCurve(ReadGrid(img.grid_paths[m]), ReadMask(img.mask_path),
                                     ThresholdGrid::Default());
      sum += c.auc;
    }
    EXPECT_NEAR(result.Method(manifest.methods[m]).auc_mean, sum / manifest.images.size(),
                1e-12);
  }
}

TEST_F(EngineTest, WorkerCountDoesNotChangeOutput) {
  const auto manifest = LoadManifest(manifest_path_);
  AnalysisConfig one;
  one.workers = 1;
  AnalysisConfig many;
  many.workers = 8;
  EXPECT_EQ(StudyResultToJson(EvaluateStudy(manifest, one)),
            StudyResultToJson(EvaluateStudy(manifest, many)));
}

TEST_F(EngineTest, CorruptGridFailsWithImageAndMethod) {
  auto manifest = LoadManifest(manifest_path_);
  const auto victim = manifest.images[5].grid_paths[2];
  WriteFileBytes(victim, {'A', 'G', 'R', 'D', 1, 0});
  try {
    AnalysisConfig cfg;
    cfg.workers = 4;
    EvaluateStudy(manifest, cfg);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruption);
    EXPECT_NE(std::string(e.what()).find(manifest.images[5].image_id), std::string::npos);
    EXPECT_NE(std::string(e.what()).find(manifest.methods[2]), std::string::npos);
  }
}

TEST_F(EngineTest, DimensionMismatchIsValidationError) {
  auto manifest = LoadManifest(manifest_path_);
  AttributionMap small;
  small.height = 4;
  small.width = 4;
  small.values.assign(16, 0.5);
  WriteGrid(small, manifest.images[0].grid_paths[0]);
  EXPECT_EQ(CodeOf([&] { EvaluateStudy(manifest, AnalysisConfig{}); }), ErrorCode::kValidation);
}

TEST_F(EngineTest, OffGridTausOfInterestAreSkipped) {
  AnalysisConfig cfg;
  cfg.grid = ThresholdGrid::Parse("0.1:0.9:5");
  const auto result = EvaluateStudy(LoadManifest(manifest_path_), cfg);
  EXPECT_EQ(result.taus_of_interest, (std::vector<double>{0.3, 0.5, 0.7}));
  EXPECT_EQ(CountBiasTests(result.bias_rows), 35u);
  cfg.grid = ThresholdGrid::Parse("0.05:0.95:10");
  const auto sparse = EvaluateStudy(LoadManifest(manifest_path_), cfg);
  EXPECT_TRUE(sparse.taus_of_interest.empty());
  EXPECT_TRUE(sparse.rankings.empty());
  EXPECT_FALSE(sparse.bias_rows.front().swing.has_value());
}

}  // namespace
}  // namespace attreval
