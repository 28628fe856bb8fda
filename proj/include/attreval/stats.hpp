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

#ifndef ATTREVAL_STATS_HPP_
#define ATTREVAL_STATS_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace attreval {

inline constexpr std::size_t kMinWilcoxonPairs = 5;
// Nonzero-pair count up to which the null distribution is enumerated exactly.
inline constexpr std::size_t kExactWilcoxonMaxN = 25;

enum class WilcoxonMethod { kExact, kNormal };

struct WilcoxonResult {
  double w_plus = 0.0;  // sum of ranks of positive differences
  double p_value = 1.0;  // two-sided
  std::size_t n_used = 0;
  std::size_t n_zero_dropped = 0;
  WilcoxonMethod method = WilcoxonMethod::kExact;
};

// Average ranks (1-based) of |values|, ties sharing the mean rank.
std::vector<double> AbsRanks(std::span<const double> values);

// Two-sided exact p-value of the signed-rank statistic w_plus given the
// (possibly tied) ranks; ranks must be multiples of 0.5.
double ExactSignedRankPValue(std::span<const double> ranks, double w_plus);

// Two-sided normal approximation with tie-corrected variance and 0.5
// continuity correction.
double NormalSignedRankPValue(std::span<const double> ranks, double w_plus);

// Paired two-sided Wilcoxon signed-rank test. Zero differences are dropped;
// throws kDegenerateSample when every difference is zero and
// kInsufficientData when fewer than 5 nonzero differences remain.
WilcoxonResult WilcoxonSignedRank(std::span<const double> diffs);

struct HolmResult {
  std::vector<double> adjusted;  // input order
  std::vector<bool> reject;
};

HolmResult HolmBonferroni(std::span<const double> p_values, double alpha);

double Median(std::span<const double> values);
double Mean(std::span<const double> values);
// Sample standard deviation, n - 1 denominator; 0 for n < 2.
double SampleStd(std::span<const double> values);

// z such that P(Z <= z) = p.
double NormalQuantile(double p);

struct ConfidenceInterval {
  double mean = 0.0;
  double half_width = 0.0;
  double level = 0.95;
};

double NormalCiHalfWidth(double sample_std, std::size_t n, double level = 0.95);
ConfidenceInterval NormalCi(std::span<const double> scores, double level = 0.95);

struct PairwiseTestResult {
  std::string label_a;
  std::string label_b;
  double w_statistic = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  double effect_size = 0.0;  // median of (a - b)
  bool significant = false;
  // True when the test could not be run (all-zero or too few nonzero
  // differences); p_raw is then 1.
  bool degenerate = false;
  std::size_t n_used = 0;
  std::size_t n_zero_dropped = 0;
};

// Runs the signed-rank test on a - b, reporting degenerate samples as p = 1
// instead of throwing. Holm fields are left for the caller.
PairwiseTestResult PairedTest(const std::string& label_a, const std::string& label_b,
                              std::span<const double> diffs);

// Holm-adjusts a family of tests in place.
void ApplyHolm(std::vector<PairwiseTestResult>& family, double alpha);

// All C(k,2) method pairs (a < b lexicographically), tested on a - b and
// Holm-corrected as one family. Score lists must be image-aligned.
std::vector<PairwiseTestResult> RunPairwiseFamily(
    const std::map<std::string, std::vector<double>>& per_method_scores, double alpha);

}  // namespace attreval

#endif  // ATTREVAL_STATS_HPP_
