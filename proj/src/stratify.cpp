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

#include <algorithm>
#include <cmath>

#include "attreval/error.hpp"
#include "attreval/stats.hpp"

namespace attreval {

double Percentile(std::span<const double> values, double q) {
  if (values.empty()) Fail(ErrorCode::kInsufficientData, "percentile of empty sample");
  if (!(q >= 0.0 && q <= 100.0)) Fail(ErrorCode::kDomain, "percentile must be in [0,100]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = static_cast<double>(v.size() - 1) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Strata ComputeStrata(const std::map<std::string, std::uint64_t>& sizes,
                     std::optional<StrataBounds> explicit_bounds) {
  if (sizes.empty()) Fail(ErrorCode::kInsufficientData, "no image sizes to stratify");
  Strata out;
  if (explicit_bounds) {
    if (explicit_bounds->small_max > explicit_bounds->large_min) {
      Fail(ErrorCode::kDomain, "strata bounds must satisfy small_max <= large_min");
    }
    out.bounds = *explicit_bounds;
    out.explicit_bounds = true;
  } else {
    std::vector<double> v;
    v.reserve(sizes.size());
    for (const auto& [id, s] : sizes) v.push_back(static_cast<double>(s));
    out.bounds.small_max = Percentile(v, kSmallPercentile);
    out.bounds.large_min = Percentile(v, kLargePercentile);
  }
  out.degenerate = out.bounds.small_max == out.bounds.large_min;

  out.strata = {
      {"small", 0.0, out.bounds.small_max, {}},
      {"medium", out.bounds.small_max, out.bounds.large_min, {}},
      {"large", out.bounds.large_min, 0.0, {}},
  };
  double max_size = 0.0;
  for (const auto& [id, s] : sizes) {
    const double x = static_cast<double>(s);
    max_size = std::max(max_size, x);
    // large is checked first so a coincident boundary lands in large
    if (x >= out.bounds.large_min) {
      out.strata[2].image_ids.push_back(id);
    } else if (x <= out.bounds.small_max) {
      out.strata[0].image_ids.push_back(id);
    } else {
      out.strata[1].image_ids.push_back(id);
    }
  }
  out.strata[2].upper_bound = std::max(max_size, out.bounds.large_min);
  return out;
}

std::optional<double> ImprovementPercent(std::optional<double> mean_small,
                                         std::optional<double> mean_large) {
  if (!mean_small || !mean_large || !(*mean_small > 0.0)) return std::nullopt;
  return (*mean_large - *mean_small) / *mean_small * 100.0;
}

StratifiedResult StratifiedPerformance(const std::string& method_id,
                                       const std::map<std::string, double>& scores,
                                       const Strata& strata) {
  std::map<std::string, const SizeStratum*> membership;
  for (const auto& s : strata.strata) {
    for (const auto& id : s.image_ids) membership[id] = &s;
  }
  for (const auto& [id, score] : scores) {
    if (!membership.count(id)) {
      Fail(ErrorCode::kValidation, "image '" + id + "' belongs to no size stratum");
    }
  }
  StratifiedResult res;
  res.method_id = method_id;
  for (const auto& s : strata.strata) {
    std::vector<std::string> ids = s.image_ids;
    std::sort(ids.begin(), ids.end());
    std::vector<double> v;
    for (const auto& id : ids) {
      auto it = scores.find(id);
      if (it != scores.end()) v.push_back(it->second);
    }
    StratumStats st;
    st.name = s.name;
    st.n = v.size();
    if (!v.empty()) st.mean = Mean(v);
    if (v.size() >= 2) st.std = SampleStd(v);
    res.strata.push_back(std::move(st));
  }
  res.improvement = ImprovementPercent(res.strata.front().mean, res.strata.back().mean);
  return res;
}

std::vector<StratifiedResult> StratifiedPerformance(
    const std::map<std::string, std::map<std::string, double>>& scores,
    const Strata& strata) {
  std::vector<StratifiedResult> out;
  for (const auto& [method, per_image] : scores) {
    out.push_back(StratifiedPerformance(method, per_image, strata));
  }
  return out;
}

std::optional<double> StratumTrendSlope(const StratifiedResult& result) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < result.strata.size(); ++i) {
    if (result.strata[i].mean) {
      xs.push_back(static_cast<double>(i));
      ys.push_back(*result.strata[i].mean);
    }
  }
  if (xs.size() < 2) return std::nullopt;
  const double mx = Mean(xs);
  const double my = Mean(ys);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace attreval
