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

#ifndef ATTREVAL_STRATIFY_HPP_
#define ATTREVAL_STRATIFY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace attreval {

inline constexpr double kSmallPercentile = 33.0;
inline constexpr double kLargePercentile = 67.0;

struct SizeStratum {
  std::string name;  // "small", "medium" or "large"
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::vector<std::string> image_ids;
};

struct StrataBounds {
  double small_max = 0.0;  // size <= small_max is small
  double large_min = 0.0;  // size >= large_min is large
};

struct Strata {
  std::vector<SizeStratum> strata;  // small, medium, large
  StrataBounds bounds;
  bool explicit_bounds = false;
  bool degenerate = false;  // both percentile bounds coincide
};

// Linear interpolation between closest ranks: h = (n - 1) * q / 100.
double Percentile(std::span<const double> values, double q);

// Percentile bounds (33rd / 67th) unless explicit bounds are given.
// small: size <= small_max; large: size >= large_min; medium otherwise.
Strata ComputeStrata(const std::map<std::string, std::uint64_t>& sizes,
                     std::optional<StrataBounds> explicit_bounds = std::nullopt);

struct StratumStats {
  std::string name;
  std::size_t n = 0;
  std::optional<double> mean;
  std::optional<double> std;  // n - 1 denominator; absent for n < 2
};

struct StratifiedResult {
  std::string method_id;
  std::vector<StratumStats> strata;
  std::optional<double> improvement;  // small -> large, percent
};

// (large - small) / small * 100; nullopt unless small > 0.
std::optional<double> ImprovementPercent(std::optional<double> mean_small,
                                         std::optional<double> mean_large);

StratifiedResult StratifiedPerformance(const std::string& method_id,
                                       const std::map<std::string, double>& scores,
                                       const Strata& strata);

std::vector<StratifiedResult> StratifiedPerformance(
    const std::map<std::string, std::map<std::string, double>>& scores,
    const Strata& strata);

// Least-squares slope of stratum mean against stratum index 0, 1, 2.
std::optional<double> StratumTrendSlope(const StratifiedResult& result);

}  // namespace attreval

#endif  // ATTREVAL_STRATIFY_HPP_
