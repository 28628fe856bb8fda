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

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "attreval/error.hpp"
#include "attreval/version.hpp"

namespace attreval {

const MethodEvalResult& StudyResult::Method(const std::string& id) const {
  for (const auto& m : method_results) {
    if (m.method_id == id) return m;
  }
  Fail(ErrorCode::kValidation, "no result for method '" + id + "'");
}

MethodEvalResult AggregateMethod(const std::string& method_id,
                                 std::vector<std::string> image_ids,
                                 std::vector<IoUCurve> per_image, double ci_level) {
  if (per_image.empty()) {
    Fail(ErrorCode::kInsufficientData, "method '" + method_id + "' has no curves");
  }
  if (image_ids.size() != per_image.size()) {
    Fail(ErrorCode::kValidation, "image ids and curves differ in length");
  }
  std::vector<std::size_t> order(per_image.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return image_ids[a] < image_ids[b]; });

  MethodEvalResult r;
  r.method_id = method_id;
  for (std::size_t k : order) {
    r.image_ids.push_back(std::move(image_ids[k]));
    r.per_image.push_back(std::move(per_image[k]));
  }
  const std::size_t n = r.per_image.size();
  const std::size_t n_tau = r.per_image.front().ious.size();

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = r.per_image[i].auc;
  r.auc_mean = Mean(v);
  r.auc_std = SampleStd(v);
  r.ci.level = ci_level;
  r.ci.mean = r.auc_mean;
  if (n >= 2) {
    r.ci.half_width = NormalCiHalfWidth(r.auc_std, n, ci_level);
  } else {
    r.ci_degenerate = true;
  }
  for (std::size_t t = 0; t < n_tau; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (r.per_image[i].ious.size() != n_tau) {
        Fail(ErrorCode::kValidation, "curves of method '" + method_id + "' differ in length");
      }
      v[i] = r.per_image[i].ious[t];
    }
    r.per_tau_mean.push_back(Mean(v));
    r.per_tau_std.push_back(SampleStd(v));
  }
  return r;
}

namespace {

// Runs task(i) for i in [0, count) on `workers` threads. If any task throws,
// the exception of the lowest failing index is rethrown after all threads
// stop, so the reported failure does not depend on scheduling.
void ParallelFor(std::size_t count, unsigned workers,
                 const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::size_t fail_index = count;
  std::exception_ptr fail;

  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      if (failed.load()) {
        // keep scanning so lower indices still run and can win the report
        std::lock_guard lock(mu);
        if (i > fail_index) return;
      }
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < fail_index) {
          fail_index = i;
          fail = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  if (fail) std::rethrow_exception(fail);
}

}  // namespace

StudyResult EvaluateStudy(const StudyManifest& manifest, const AnalysisConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    Fail(ErrorCode::kDomain, "alpha must be in (0,1)");
  }
  const std::size_t n_img = manifest.images.size();
  const std::size_t n_meth = manifest.methods.size();
  if (n_img == 0 || n_meth == 0) Fail(ErrorCode::kInsufficientData, "empty study");
  for (const auto& img : manifest.images) {
    if (img.grid_paths.size() != n_meth) {
      Fail(ErrorCode::kValidation, "image '" + img.image_id + "' lacks grids for some methods");
    }
  }

  std::vector<GroundTruthMask> masks(n_img);
  ParallelFor(n_img, config.workers, [&](std::size_t i) {
    const ImageEntry& img = manifest.images[i];
    try {
      masks[i] = ReadMask(img.mask_path, config.mask_threshold);
    } catch (const Error& e) {
      throw Error(e.code(), "image '" + img.image_id + "': " + e.what());
    }
    masks[i].image_id = img.image_id;
    masks[i].original_positive_pixels = img.original_positive_pixels;
  });

  // curves[m * n_img + i]
  std::vector<IoUCurve> curves(n_img * n_meth);
  ParallelFor(n_img * n_meth, config.workers, [&](std::size_t k) {
    const std::size_t m = k / n_img;
    const std::size_t i = k % n_img;
    const ImageEntry& img = manifest.images[i];
    try {
      AttributionMap map = ReadGrid(img.grid_paths[m]);
      curves[k] = ComputeIoUCurve(map, masks[i], config.grid, config.comparator);
    } catch (const Error& e) {
      throw Error(e.code(), "image '" + img.image_id + "', method '" +
                                manifest.methods[m] + "': " + e.what());
    }
  });

  StudyResult res;
  res.tool_version = kToolVersion;
  res.study_name = manifest.study_name;
  res.manifest_fingerprint = manifest.fingerprint;
  res.seed = manifest.seed;
  res.taus = config.grid.taus();
  res.alpha = config.alpha;
  res.ci_level = config.ci_level;
  res.mask_threshold = config.mask_threshold;
  res.comparator = config.comparator == Comparator::kGreaterEqual ? ">=" : ">";
  res.methods = manifest.methods;

  std::vector<std::string> ids;
  for (const auto& img : manifest.images) ids.push_back(img.image_id);
  for (std::size_t m = 0; m < n_meth; ++m) {
    std::vector<IoUCurve> per_image(curves.begin() + static_cast<std::ptrdiff_t>(m * n_img),
                                    curves.begin() + static_cast<std::ptrdiff_t>((m + 1) * n_img));
    res.method_results.push_back(
        AggregateMethod(manifest.methods[m], ids, std::move(per_image), config.ci_level));
  }

  std::map<std::string, std::vector<double>> auc_scores;
  std::map<std::string, std::vector<IoUCurve>> method_curves;
  std::map<std::string, std::map<std::string, double>> auc_by_image;
  for (const auto& mr : res.method_results) {
    auto& s = auc_scores[mr.method_id];
    for (std::size_t i = 0; i < mr.per_image.size(); ++i) {
      s.push_back(mr.per_image[i].auc);
      auc_by_image[mr.method_id][mr.image_ids[i]] = mr.per_image[i].auc;
    }
    method_curves[mr.method_id] = mr.per_image;
  }
  res.pairwise = RunPairwiseFamily(auc_scores, config.alpha);

  for (double tau : config.taus_of_interest) {
    if (config.grid.IndexOf(tau) >= 0) res.taus_of_interest.push_back(tau);
  }
  res.bias_rows = ThresholdBiasTable(method_curves, res.taus_of_interest, config.alpha);

  std::map<std::string, std::uint64_t> sizes;
  for (const auto& img : manifest.images) sizes[img.image_id] = img.original_positive_pixels;
  res.strata = ComputeStrata(sizes, config.strata_bounds);
  res.stratified = StratifiedPerformance(auc_by_image, res.strata);

  std::map<std::string, double> auc_means;
  for (const auto& mr : res.method_results) auc_means[mr.method_id] = mr.auc_mean;
  for (double tau : res.taus_of_interest) {
    const auto t = static_cast<std::size_t>(config.grid.IndexOf(tau));
    std::map<std::string, double> at_tau;
    for (const auto& mr : res.method_results) at_tau[mr.method_id] = mr.per_tau_mean[t];
    char label[32];
    std::snprintf(label, sizeof label, "IoU@%.2f", tau);
    res.rankings.push_back(CompareRankings("AUC-IoU", auc_means, label, at_tau));
  }
  return res;
}

}  // namespace attreval
