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

#ifndef ATTREVAL_METRICS_HPP_
#define ATTREVAL_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "attreval/grid_io.hpp"

namespace attreval {

// Ordered binarization thresholds, strictly increasing and inside (0, 1).
class ThresholdGrid {
 public:
  // 19 thresholds 0.05, 0.10, ..., 0.95.
  static ThresholdGrid Default();
  // n evenly spaced thresholds from lo to hi inclusive.
  static ThresholdGrid Uniform(double lo, double hi, std::size_t n);
  // Parses "lo:hi:n".
  static ThresholdGrid Parse(const std::string& text);

  explicit ThresholdGrid(std::vector<double> taus);

  const std::vector<double>& taus() const { return taus_; }
  std::size_t size() const { return taus_.size(); }
  double operator[](std::size_t i) const { return taus_[i]; }
  double span() const { return taus_.back() - taus_.front(); }

  // Index of the grid point within 1e-9 of tau, or -1.
  std::ptrdiff_t IndexOf(double tau) const;

 private:
  std::vector<double> taus_;
};

enum class Comparator { kGreaterEqual, kGreater };

struct IoUCurve {
  std::vector<double> taus;
  std::vector<double> ious;
  double auc = 0.0;      // trapezoid / (tau_max - tau_min)
  double auc_raw = 0.0;  // trapezoid integral without width normalization
};

struct PixelCounts {
  std::uint64_t intersection = 0;
  std::uint64_t union_ = 0;
};

// Min-max rescale into [0, 1]; a constant input maps to all zeros.
std::vector<double> Normalize(std::span<const double> values);

std::vector<std::uint8_t> Binarize(std::span<const double> normalized, double tau,
                                   Comparator cmp = Comparator::kGreaterEqual);

PixelCounts CountOverlap(std::span<const std::uint8_t> pred,
                         std::span<const std::uint8_t> truth);

// |pred & truth| / |pred | truth|, and 1.0 when the union is empty.
double IoU(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> truth);

// Composite trapezoid of ious over taus.
double TrapezoidIntegral(std::span<const double> taus, std::span<const double> ious);
double AucIoU(std::span<const double> taus, std::span<const double> ious);

IoUCurve ComputeIoUCurve(const AttributionMap& map, const GroundTruthMask& mask,
                         const ThresholdGrid& grid,
                         Comparator cmp = Comparator::kGreaterEqual);

}  // namespace attreval

#endif  // ATTREVAL_METRICS_HPP_
