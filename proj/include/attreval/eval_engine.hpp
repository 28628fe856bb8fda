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

#ifndef ATTREVAL_EVAL_ENGINE_HPP_
#define ATTREVAL_EVAL_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "attreval/bias_analysis.hpp"
#include "attreval/grid_io.hpp"
#include "attreval/metrics.hpp"
#include "attreval/stats.hpp"
#include "attreval/stratify.hpp"

namespace attreval {

struct AnalysisConfig {
  ThresholdGrid grid = ThresholdGrid::Default();
  double alpha = 0.05;
  double ci_level = 0.95;
  std::optional<StrataBounds> strata_bounds;
  int mask_threshold = kDefaultMaskThreshold;
  Comparator comparator = Comparator::kGreaterEqual;
  std::vector<double> taus_of_interest = DefaultTausOfInterest();
  // Worker threads for the per-image map phase; 0 = hardware concurrency.
  // Results do not depend on it.
  unsigned workers = 0;
};

struct MethodEvalResult {
  std::string method_id;
  std::vector<std::string> image_ids;  // sorted
  std::vector<IoUCurve> per_image;     // aligned with image_ids
  double auc_mean = 0.0;
  double auc_std = 0.0;
  ConfidenceInterval ci;
  bool ci_degenerate = false;  // fewer than two images
  std::vector<double> per_tau_mean;
  std::vector<double> per_tau_std;
};

struct StudyResult {
  std::string tool_version;
  std::string study_name;
  std::string manifest_fingerprint;
  std::optional<std::uint64_t> seed;
  // config echo
  std::vector<double> taus;
  double alpha = 0.05;
  double ci_level = 0.95;
  int mask_threshold = kDefaultMaskThreshold;
  std::string comparator;
  std::vector<double> taus_of_interest;

  std::vector<std::string> methods;  // manifest order
  std::vector<MethodEvalResult> method_results;  // manifest order
  std::vector<PairwiseTestResult> pairwise;
  std::vector<ThresholdBiasRow> bias_rows;
  Strata strata;
  std::vector<StratifiedResult> stratified;
  std::vector<RankingComparison> rankings;

  const MethodEvalResult& Method(const std::string& id) const;
};

// Aggregates image-aligned curves; summation runs in image_id order.
MethodEvalResult AggregateMethod(const std::string& method_id,
                                 std::vector<std::string> image_ids,
                                 std::vector<IoUCurve> per_image,
                                 double ci_level = 0.95);

StudyResult EvaluateStudy(const StudyManifest& manifest, const AnalysisConfig& config);

}  // namespace attreval

#endif  // ATTREVAL_EVAL_ENGINE_HPP_
