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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "attreval/error.hpp"

namespace attreval {

std::vector<double> AbsRanks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a]) < std::abs(values[b]);
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && std::abs(values[order[j]]) == std::abs(values[order[i]])) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double ExactSignedRankPValue(std::span<const double> ranks, double w_plus) {
  // Work in doubled ranks so tied (half-integer) ranks become integers.
  std::vector<std::size_t> doubled;
  doubled.reserve(ranks.size());
  std::size_t total = 0;
  for (double r : ranks) {
    const double d = 2.0 * r;
    if (d < 1.0 || d != std::round(d)) {
      Fail(ErrorCode::kDomain, "exact signed-rank needs ranks in multiples of 0.5");
    }
    doubled.push_back(static_cast<std::size_t>(d));
    total += doubled.back();
  }
  // counts[s] = number of sign assignments whose doubled W+ equals s.
  std::vector<double> counts(total + 1, 0.0);
  counts[0] = 1.0;
  std::size_t reach = 0;
  for (std::size_t r : doubled) {
    for (std::size_t s = reach + 1; s-- > 0;) {
      if (counts[s] != 0.0) counts[s + r] += counts[s];
    }
    reach += r;
  }
  const double w2 = std::round(2.0 * w_plus);
  double lower = 0.0;
  double upper = 0.0;
  double all = 0.0;
  for (std::size_t s = 0; s <= total; ++s) {
    all += counts[s];
    if (static_cast<double>(s) <= w2) lower += counts[s];
    if (static_cast<double>(s) >= w2) upper += counts[s];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / all);
}

double NormalSignedRankPValue(std::span<const double> ranks, double w_plus) {
  const double n = static_cast<double>(ranks.size());
  const double mean = n * (n + 1.0) / 4.0;
  double tie_term = 0.0;
  std::vector<double> sorted(ranks.begin(), ranks.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  if (!(var > 0.0)) return 1.0;
  const double z = (std::abs(w_plus - mean) - 0.5) / std::sqrt(var);
  if (z <= 0.0) return 1.0;
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

WilcoxonResult WilcoxonSignedRank(std::span<const double> diffs) {
  WilcoxonResult res;
  std::vector<double> nonzero;
  nonzero.reserve(diffs.size());
  for (double d : diffs) {
    if (!std::isfinite(d)) Fail(ErrorCode::kDomain, "non-finite paired difference");
    if (d == 0.0) {
      ++res.n_zero_dropped;
    } else {
      nonzero.push_back(d);
    }
  }
  if (nonzero.empty()) {
    Fail(ErrorCode::kDegenerateSample, "all paired differences are zero");
  }
  if (nonzero.size() < kMinWilcoxonPairs) {
    Fail(ErrorCode::kInsufficientData,
         "signed-rank test needs at least 5 nonzero differences, got " +
             std::to_string(nonzero.size()));
  }
  res.n_used = nonzero.size();
  const std::vector<double> ranks = AbsRanks(nonzero);
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    if (nonzero[i] > 0.0) res.w_plus += ranks[i];
  }
  if (res.n_used <= kExactWilcoxonMaxN) {
    res.method = WilcoxonMethod::kExact;
    res.p_value = ExactSignedRankPValue(ranks, res.w_plus);
  } else {
    res.method = WilcoxonMethod::kNormal;
    res.p_value = NormalSignedRankPValue(ranks, res.w_plus);
  }
  return res;
}

HolmResult HolmBonferroni(std::span<const double> p_values, double alpha) {
  const std::size_t m = p_values.size();
  if (m == 0) Fail(ErrorCode::kDomain, "Holm correction needs at least one p-value");
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      Fail(ErrorCode::kDomain, "p-value outside [0,1]: " + std::to_string(p));
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  HolmResult res;
  res.adjusted.assign(m, 1.0);
  res.reject.assign(m, false);
  double running = 0.0;
  bool still_rejecting = true;
  for (std::size_t j = 0; j < m; ++j) {
    const double p = p_values[order[j]];
    const double factor = static_cast<double>(m - j);
    running = std::max(running, std::min(1.0, factor * p));
    res.adjusted[order[j]] = running;
    still_rejecting = still_rejecting && p <= alpha / factor;
    res.reject[order[j]] = still_rejecting;
  }
  return res;
}

double Median(std::span<const double> values) {
  if (values.empty()) Fail(ErrorCode::kInsufficientData, "median of empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double Mean(std::span<const double> values) {
  if (values.empty()) Fail(ErrorCode::kInsufficientData, "mean of empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double SampleStd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double NormalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) Fail(ErrorCode::kDomain, "normal quantile needs p in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double NormalCiHalfWidth(double sample_std, std::size_t n, double level) {
  if (n < 2) Fail(ErrorCode::kInsufficientData, "confidence interval needs n >= 2");
  if (!(level > 0.0 && level < 1.0)) Fail(ErrorCode::kDomain, "CI level must be in (0,1)");
  if (sample_std < 0.0) Fail(ErrorCode::kDomain, "negative standard deviation");
  return NormalQuantile(0.5 * (1.0 + level)) * sample_std /
         std::sqrt(static_cast<double>(n));
}

ConfidenceInterval NormalCi(std::span<const double> scores, double level) {
  if (scores.size() < 2) Fail(ErrorCode::kInsufficientData, "confidence interval needs n >= 2");
  ConfidenceInterval ci;
  ci.mean = Mean(scores);
  ci.half_width = NormalCiHalfWidth(SampleStd(scores), scores.size(), level);
  ci.level = level;
  return ci;
}

PairwiseTestResult PairedTest(const std::string& label_a, const std::string& label_b,
                              std::span<const double> diffs) {
  PairwiseTestResult r;
  r.label_a = label_a;
  r.label_b = label_b;
  r.effect_size = Median(diffs);
  try {
    const WilcoxonResult w = WilcoxonSignedRank(diffs);
    r.w_statistic = w.w_plus;
    r.p_raw = w.p_value;
    r.n_used = w.n_used;
    r.n_zero_dropped = w.n_zero_dropped;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateSample &&
        e.code() != ErrorCode::kInsufficientData) {
      throw;
    }
    r.degenerate = true;
    r.p_raw = 1.0;
    std::vector<double> nonzero;
    for (double d : diffs) {
      if (d == 0.0) {
        ++r.n_zero_dropped;
      } else {
        nonzero.push_back(d);
      }
    }
    r.n_used = nonzero.size();
    const std::vector<double> ranks = AbsRanks(nonzero);
    for (std::size_t i = 0; i < nonzero.size(); ++i) {
      if (nonzero[i] > 0.0) r.w_statistic += ranks[i];
    }
  }
  r.p_adjusted = r.p_raw;
  return r;
}

void ApplyHolm(std::vector<PairwiseTestResult>& family, double alpha) {
  if (family.empty()) return;
  std::vector<double> p;
  p.reserve(family.size());
  for (const auto& r : family) p.push_back(r.p_raw);
  const HolmResult h = HolmBonferroni(p, alpha);
  for (std::size_t i = 0; i < family.size(); ++i) {
    family[i].p_adjusted = h.adjusted[i];
    family[i].significant = h.reject[i] && !family[i].degenerate;
  }
}

std::vector<PairwiseTestResult> RunPairwiseFamily(
    const std::map<std::string, std::vector<double>>& per_method_scores, double alpha) {
  std::vector<PairwiseTestResult> family;
  if (per_method_scores.empty()) return family;
  const std::size_t n = per_method_scores.begin()->second.size();
  for (const auto& [id, scores] : per_method_scores) {
    if (scores.size() != n) {
      Fail(ErrorCode::kValidation, "method '" + id + "' has " +
                                       std::to_string(scores.size()) +
                                       " scores, expected " + std::to_string(n));
    }
  }
  std::vector<double> diffs(n);
  // std::map iterates in lexicographic key order.
  for (auto a = per_method_scores.begin(); a != per_method_scores.end(); ++a) {
    for (auto b = std::next(a); b != per_method_scores.end(); ++b) {
      for (std::size_t i = 0; i < n; ++i) diffs[i] = a->second[i] - b->second[i];
      family.push_back(PairedTest(a->first, b->first, diffs));
    }
  }
  ApplyHolm(family, alpha);
  return family;
}

}  // namespace attreval
