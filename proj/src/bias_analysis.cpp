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

#include "attreval/bias_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "attreval/error.hpp"

namespace attreval {

std::optional<double> RelativeDifference(double auc, double iou_tau) {
  if (iou_tau < 0.0) Fail(ErrorCode::kDomain, "IoU must be nonnegative");
  if (iou_tau == 0.0) return std::nullopt;
  return (auc - iou_tau) / iou_tau * 100.0;
}

std::optional<double> PerformanceSwing(std::optional<double> rel_low,
                                       std::optional<double> rel_high) {
  if (!rel_low || !rel_high) return std::nullopt;
  return std::abs(*rel_low - *rel_high);
}

namespace {

std::string TauLabel(double tau) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "IoU@%.2f", tau);
  return buf;
}

}  // namespace

std::vector<ThresholdBiasRow> ThresholdBiasTable(
    const std::map<std::string, std::vector<IoUCurve>>& per_method_curves,
    const std::vector<double>& taus_of_interest, double alpha) {
  std::vector<ThresholdBiasRow> rows;
  if (per_method_curves.empty()) return rows;

  const auto& first = per_method_curves.begin()->second;
  if (first.empty()) Fail(ErrorCode::kInsufficientData, "no curves to analyse");
  const std::vector<double> grid = first.front().taus;
  const std::size_t n_images = first.size();
  for (const auto& [method, curves] : per_method_curves) {
    if (curves.size() != n_images) {
      Fail(ErrorCode::kValidation, "method '" + method + "' has " +
                                       std::to_string(curves.size()) +
                                       " curves, expected " + std::to_string(n_images));
    }
    for (const auto& c : curves) {
      if (c.taus != grid) {
        Fail(ErrorCode::kValidation, "method '" + method + "' uses a different threshold grid");
      }
    }
  }
  ThresholdGrid tg(grid);
  std::vector<std::size_t> interest_idx;
  for (double tau : taus_of_interest) {
    const auto idx = tg.IndexOf(tau);
    if (idx < 0) {
      Fail(ErrorCode::kValidation, "threshold " + std::to_string(tau) + " is not on the grid");
    }
    interest_idx.push_back(static_cast<std::size_t>(idx));
  }

  // Flat family so Holm sees all methods x thresholds at once.
  std::vector<PairwiseTestResult> family;
  std::vector<double> auc(n_images);
  std::vector<double> iou(n_images);
  std::vector<double> diffs(n_images);
  for (const auto& [method, curves] : per_method_curves) {
    ThresholdBiasRow row;
    row.method_id = method;
    row.grid_taus = grid;
    for (std::size_t i = 0; i < n_images; ++i) auc[i] = curves[i].auc;
    row.auc_mean = Mean(auc);
    for (std::size_t t = 0; t < grid.size(); ++t) {
      for (std::size_t i = 0; i < n_images; ++i) {
        iou[i] = curves[i].ious[t];
        diffs[i] = auc[i] - iou[i];
      }
      family.push_back(PairedTest("AUC-IoU", TauLabel(grid[t]), diffs));
    }
    row.taus_of_interest = taus_of_interest;
    for (std::size_t k = 0; k < interest_idx.size(); ++k) {
      for (std::size_t i = 0; i < n_images; ++i) iou[i] = curves[i].ious[interest_idx[k]];
      row.iou_at.push_back(Mean(iou));
      row.rel_diff_at.push_back(RelativeDifference(row.auc_mean, row.iou_at.back()));
    }
    std::optional<double> low;
    std::optional<double> high;
    bool have_low = false;
    bool have_high = false;
    for (std::size_t k = 0; k < taus_of_interest.size(); ++k) {
      if (std::abs(taus_of_interest[k] - kSwingLowTau) < 1e-9) {
        low = row.rel_diff_at[k];
        have_low = true;
      }
      if (std::abs(taus_of_interest[k] - kSwingHighTau) < 1e-9) {
        high = row.rel_diff_at[k];
        have_high = true;
      }
    }
    if (have_low && have_high) row.swing = PerformanceSwing(low, high);
    rows.push_back(std::move(row));
  }

  ApplyHolm(family, alpha);
  std::size_t next = 0;
  for (auto& row : rows) {
    row.tests.assign(family.begin() + static_cast<std::ptrdiff_t>(next),
                     family.begin() + static_cast<std::ptrdiff_t>(next + grid.size()));
    next += grid.size();
  }
  return rows;
}

std::size_t CountBiasTests(const std::vector<ThresholdBiasRow>& rows) {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.tests.size();
  return n;
}

std::map<std::string, int> RankDescending(const std::map<std::string, double>& scores,
                                          bool* had_ties) {
  std::vector<std::pair<std::string, double>> items(scores.begin(), scores.end());
  // items are already in method_id order; stable sort keeps it for ties.
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  bool ties = false;
  std::map<std::string, int> ranks;
  for (std::size_t i = 0; i < items.size(); ++i) {
    ranks[items[i].first] = static_cast<int>(i + 1);
    if (i > 0 && items[i].second == items[i - 1].second) ties = true;
  }
  if (had_ties) *had_ties = ties;
  return ranks;
}

RankingComparison CompareRankings(const std::string& criterion_a,
                                  const std::map<std::string, double>& scores_a,
                                  const std::string& criterion_b,
                                  const std::map<std::string, double>& scores_b) {
  if (scores_a.size() != scores_b.size() ||
      !std::equal(scores_a.begin(), scores_a.end(), scores_b.begin(),
                  [](const auto& x, const auto& y) { return x.first == y.first; })) {
    Fail(ErrorCode::kValidation, "ranking criteria cover different method sets");
  }
  RankingComparison rc;
  rc.criterion_a = criterion_a;
  rc.criterion_b = criterion_b;
  rc.rank_a = RankDescending(scores_a, &rc.ties_a);
  rc.rank_b = RankDescending(scores_b, &rc.ties_b);
  for (auto x = rc.rank_a.begin(); x != rc.rank_a.end(); ++x) {
    for (auto y = std::next(x); y != rc.rank_a.end(); ++y) {
      const bool a_order = x->second < y->second;
      const bool b_order = rc.rank_b.at(x->first) < rc.rank_b.at(y->first);
      if (a_order != b_order) rc.reversals.emplace_back(x->first, y->first);
    }
  }
  return rc;
}

}  // namespace attreval
