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

#ifndef ATTREVAL_BIAS_ANALYSIS_HPP_
#define ATTREVAL_BIAS_ANALYSIS_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "attreval/metrics.hpp"
#include "attreval/stats.hpp"

namespace attreval {

inline constexpr double kSwingLowTau = 0.3;
inline constexpr double kSwingHighTau = 0.7;

// The single thresholds compared against AUC-IoU in bias reports.
inline const std::vector<double>& DefaultTausOfInterest() {
  static const std::vector<double> taus = {0.3, 0.5, 0.7};
  return taus;
}

// (auc - iou_tau) / iou_tau * 100; nullopt when iou_tau is zero.
std::optional<double> RelativeDifference(double auc, double iou_tau);

// |rel_low - rel_high| in percentage points; nullopt if either is undefined.
std::optional<double> PerformanceSwing(std::optional<double> rel_low,
                                       std::optional<double> rel_high);

struct ThresholdBiasRow {
  std::string method_id;
  double auc_mean = 0.0;
  std::vector<double> taus_of_interest;
  std::vector<double> iou_at;                      // mean IoU per tau of interest
  std::vector<std::optional<double>> rel_diff_at;  // per tau of interest
  std::optional<double> swing;                     // between 0.3 and 0.7
  // One test per grid threshold: per-image AUC vs per-image IoU(tau),
  // Holm-adjusted across every method and threshold.
  std::vector<double> grid_taus;
  std::vector<PairwiseTestResult> tests;
};

// per_method_curves: image-aligned curves for each method, all on the same
// grid. Rows come back in method_id order.
std::vector<ThresholdBiasRow> ThresholdBiasTable(
    const std::map<std::string, std::vector<IoUCurve>>& per_method_curves,
    const std::vector<double>& taus_of_interest, double alpha);

std::size_t CountBiasTests(const std::vector<ThresholdBiasRow>& rows);

struct RankingComparison {
  std::string criterion_a;
  std::string criterion_b;
  std::map<std::string, int> rank_a;  // 1 = best
  std::map<std::string, int> rank_b;
  bool ties_a = false;  // a tie was broken by method_id
  bool ties_b = false;
  // Pairs (x, y), x < y, whose relative order differs between criteria.
  std::vector<std::pair<std::string, std::string>> reversals;
};

// Descending ranks 1..k, ties broken by method_id.
std::map<std::string, int> RankDescending(const std::map<std::string, double>& scores,
                                          bool* had_ties = nullptr);

RankingComparison CompareRankings(const std::string& criterion_a,
                                  const std::map<std::string, double>& scores_a,
                                  const std::string& criterion_b,
                                  const std::map<std::string, double>& scores_b);

}  // namespace attreval

#endif  // ATTREVAL_BIAS_ANALYSIS_HPP_
