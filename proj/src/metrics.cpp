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

#include "attreval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "attreval/error.hpp"

namespace attreval {

ThresholdGrid::ThresholdGrid(std::vector<double> taus) : taus_(std::move(taus)) {
  if (taus_.empty()) Fail(ErrorCode::kDomain, "threshold grid is empty");
  for (std::size_t i = 0; i < taus_.size(); ++i) {
    if (!(taus_[i] > 0.0 && taus_[i] < 1.0)) {
      Fail(ErrorCode::kDomain, "threshold outside (0,1): " + std::to_string(taus_[i]));
    }
    if (i > 0 && !(taus_[i] > taus_[i - 1])) {
      Fail(ErrorCode::kDomain, "thresholds must be strictly increasing");
    }
  }
}

ThresholdGrid ThresholdGrid::Default() { return Uniform(0.05, 0.95, 19); }

ThresholdGrid ThresholdGrid::Uniform(double lo, double hi, std::size_t n) {
  if (n < 2) Fail(ErrorCode::kDomain, "threshold grid needs at least 2 points");
  if (!(lo < hi)) Fail(ErrorCode::kDomain, "threshold grid needs lo < hi");
  std::vector<double> taus(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) taus[i] = lo + step * static_cast<double>(i);
  taus.back() = hi;
  return ThresholdGrid(std::move(taus));
}

ThresholdGrid ThresholdGrid::Parse(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) {
    Fail(ErrorCode::kDomain, "thresholds must be given as lo:hi:n, got '" + text + "'");
  }
  try {
    std::size_t used = 0;
    const double lo = std::stod(text.substr(0, a));
    const double hi = std::stod(text.substr(a + 1, b - a - 1));
    const std::string n_text = text.substr(b + 1);
    const long n = std::stol(n_text, &used);
    if (used != n_text.size() || n < 2) throw std::invalid_argument("n");
    return Uniform(lo, hi, static_cast<std::size_t>(n));
  } catch (const std::logic_error&) {
    Fail(ErrorCode::kDomain, "cannot parse thresholds '" + text + "'");
  }
}

std::ptrdiff_t ThresholdGrid::IndexOf(double tau) const {
  for (std::size_t i = 0; i < taus_.size(); ++i) {
    if (std::abs(taus_[i] - tau) < 1e-9) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

std::vector<double> Normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = (values[i] - lo) / range;
  }
  return out;
}

std::vector<std::uint8_t> Binarize(std::span<const double> normalized, double tau,
                                   Comparator cmp) {
  if (!(tau > 0.0 && tau < 1.0)) {
    Fail(ErrorCode::kDomain, "binarization threshold outside (0,1)");
  }
  std::vector<std::uint8_t> out(normalized.size());
  if (cmp == Comparator::kGreaterEqual) {
    for (std::size_t i = 0; i < normalized.size(); ++i) out[i] = normalized[i] >= tau;
  } else {
    for (std::size_t i = 0; i < normalized.size(); ++i) out[i] = normalized[i] > tau;
  }
  return out;
}

PixelCounts CountOverlap(std::span<const std::uint8_t> pred,
                         std::span<const std::uint8_t> truth) {
  if (pred.size() != truth.size()) {
    Fail(ErrorCode::kValidation, "IoU operands differ in size (" +
                                     std::to_string(pred.size()) + " vs " +
                                     std::to_string(truth.size()) + ")");
  }
  PixelCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != 0;
    const bool t = truth[i] != 0;
    c.intersection += p && t;
    c.union_ += p || t;
  }
  return c;
}

double IoU(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> truth) {
  const PixelCounts c = CountOverlap(pred, truth);
  if (c.union_ == 0) return 1.0;
  return static_cast<double>(c.intersection) / static_cast<double>(c.union_);
}

double TrapezoidIntegral(std::span<const double> taus, std::span<const double> ious) {
  if (taus.size() != ious.size()) {
    Fail(ErrorCode::kValidation, "curve has mismatched tau/IoU lengths");
  }
  if (taus.size() < 2) Fail(ErrorCode::kDomain, "AUC needs at least 2 curve points");
  double area = 0.0;
  for (std::size_t i = 1; i < taus.size(); ++i) {
    area += 0.5 * (ious[i] + ious[i - 1]) * (taus[i] - taus[i - 1]);
  }
  return area;
}

double AucIoU(std::span<const double> taus, std::span<const double> ious) {
  const double area = TrapezoidIntegral(taus, ious);
  const double width = taus.back() - taus.front();
  if (!(width > 0.0)) Fail(ErrorCode::kDomain, "AUC needs a positive threshold span");
  // The normalized area is a weighted average of the curve points, so it lies
  // within their range; clamping removes rounding drift (constant c -> c).
  const auto [lo, hi] = std::minmax_element(ious.begin(), ious.end());
  return std::clamp(area / width, *lo, *hi);
}

IoUCurve ComputeIoUCurve(const AttributionMap& map, const GroundTruthMask& mask,
                         const ThresholdGrid& grid, Comparator cmp) {
  if (map.height != mask.height || map.width != mask.width) {
    Fail(ErrorCode::kValidation,
         "map " + std::to_string(map.height) + "x" + std::to_string(map.width) +
             " does not match mask " + std::to_string(mask.height) + "x" +
             std::to_string(mask.width));
  }
  const std::vector<double> norm = Normalize(map.values);
  IoUCurve curve;
  curve.taus = grid.taus();
  curve.ious.reserve(grid.size());
  for (double tau : grid.taus()) {
    curve.ious.push_back(IoU(Binarize(norm, tau, cmp), mask.bits));
  }
  curve.auc = AucIoU(curve.taus, curve.ious);
  curve.auc_raw = TrapezoidIntegral(curve.taus, curve.ious);
  return curve;
}

}  // namespace attreval
