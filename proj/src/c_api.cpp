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

#include "attreval/attreval.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "attreval/error.hpp"
#include "attreval/eval_engine.hpp"
#include "attreval/grid_io.hpp"
#include "attreval/metrics.hpp"
#include "attreval/report.hpp"
#include "attreval/stats.hpp"
#include "attreval/synthgen.hpp"
#include "attreval/version.hpp"

struct aeval_grid {
  attreval::AttributionMap map;
};
struct aeval_mask {
  attreval::GroundTruthMask mask;
};
struct aeval_options {
  attreval::AnalysisConfig config;
};
struct aeval_result {
  attreval::StudyResult result;
};

namespace {

thread_local std::string g_last_error;

aeval_status FromCode(attreval::ErrorCode code) {
  using attreval::ErrorCode;
  switch (code) {
    case ErrorCode::kFormat: return AEVAL_ERR_FORMAT;
    case ErrorCode::kCorruption: return AEVAL_ERR_CORRUPTION;
    case ErrorCode::kValidation: return AEVAL_ERR_VALIDATION;
    case ErrorCode::kIo: return AEVAL_ERR_IO;
    case ErrorCode::kResolution: return AEVAL_ERR_RESOLUTION;
    case ErrorCode::kDomain: return AEVAL_ERR_DOMAIN;
    case ErrorCode::kInsufficientData: return AEVAL_ERR_INSUFFICIENT_DATA;
    case ErrorCode::kDegenerateSample: return AEVAL_ERR_DEGENERATE;
  }
  return AEVAL_ERR_INTERNAL;
}

aeval_status SetError(aeval_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename F>
aeval_status Guard(F&& body) {
  try {
    body();
    return AEVAL_OK;
  } catch (const attreval::Error& e) {
    return SetError(FromCode(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return SetError(AEVAL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return SetError(AEVAL_ERR_INTERNAL, e.what());
  } catch (...) {
    return SetError(AEVAL_ERR_INTERNAL, "unknown error");
  }
}

aeval_status NullArg(const char* what) {
  return SetError(AEVAL_ERR_INVALID_ARGUMENT, std::string("null argument: ") + what);
}

char* CopyString(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* aeval_version(void) { return attreval::kToolVersion; }

const char* aeval_status_string(aeval_status status) {
  switch (status) {
    case AEVAL_OK: return "ok";
    case AEVAL_ERR_FORMAT: return "format error";
    case AEVAL_ERR_CORRUPTION: return "corruption error";
    case AEVAL_ERR_VALIDATION: return "validation error";
    case AEVAL_ERR_IO: return "I/O error";
    case AEVAL_ERR_RESOLUTION: return "resolution error";
    case AEVAL_ERR_DOMAIN: return "domain error";
    case AEVAL_ERR_INSUFFICIENT_DATA: return "insufficient-data error";
    case AEVAL_ERR_DEGENERATE: return "degenerate-sample error";
    case AEVAL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AEVAL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* aeval_last_error(void) { return g_last_error.c_str(); }

void aeval_string_free(char* s) { delete[] s; }

aeval_status aeval_grid_create(uint32_t height, uint32_t width, const double* values,
                               aeval_grid** out) {
  if (!values) return NullArg("values");
  if (!out) return NullArg("out");
  return Guard([&] {
    auto g = std::make_unique<aeval_grid>();
    g->map.height = height;
    g->map.width = width;
    g->map.values.assign(values, values + std::size_t{height} * width);
    g->map.Validate();
    *out = g.release();
  });
}

aeval_status aeval_grid_read(const char* path, aeval_grid** out) {
  if (!path) return NullArg("path");
  if (!out) return NullArg("out");
  return Guard([&] { *out = new aeval_grid{attreval::ReadGrid(path)}; });
}

aeval_status aeval_grid_write(const aeval_grid* grid, const char* path) {
  if (!grid) return NullArg("grid");
  if (!path) return NullArg("path");
  return Guard([&] { attreval::WriteGrid(grid->map, path); });
}

aeval_status aeval_grid_dims(const aeval_grid* grid, uint32_t* height, uint32_t* width) {
  if (!grid) return NullArg("grid");
  if (height) *height = grid->map.height;
  if (width) *width = grid->map.width;
  return AEVAL_OK;
}

aeval_status aeval_grid_values(const aeval_grid* grid, double* out, size_t n) {
  if (!grid) return NullArg("grid");
  if (!out) return NullArg("out");
  if (n < grid->map.size()) {
    return SetError(AEVAL_ERR_INVALID_ARGUMENT, "output buffer too small");
  }
  std::copy(grid->map.values.begin(), grid->map.values.end(), out);
  return AEVAL_OK;
}

void aeval_grid_free(aeval_grid* grid) { delete grid; }

aeval_status aeval_mask_read(const char* path, int threshold, aeval_mask** out) {
  if (!path) return NullArg("path");
  if (!out) return NullArg("out");
  return Guard([&] { *out = new aeval_mask{attreval::ReadMask(path, threshold)}; });
}

aeval_status aeval_mask_create(uint32_t height, uint32_t width, const uint8_t* bits,
                               aeval_mask** out) {
  if (!bits) return NullArg("bits");
  if (!out) return NullArg("out");
  return Guard([&] {
    auto m = std::make_unique<aeval_mask>();
    m->mask.height = height;
    m->mask.width = width;
    m->mask.bits.assign(bits, bits + std::size_t{height} * width);
    m->mask.Validate();
    *out = m.release();
  });
}

aeval_status aeval_mask_bits(const aeval_mask* mask, uint8_t* out, size_t n) {
  if (!mask) return NullArg("mask");
  if (!out) return NullArg("out");
  if (n < mask->mask.size()) {
    return SetError(AEVAL_ERR_INVALID_ARGUMENT, "output buffer too small");
  }
  std::copy(mask->mask.bits.begin(), mask->mask.bits.end(), out);
  return AEVAL_OK;
}

void aeval_mask_free(aeval_mask* mask) { delete mask; }

aeval_status aeval_iou(const uint8_t* pred, const uint8_t* truth, size_t n, double* out) {
  if (!pred || !truth || !out) return NullArg("pred/truth/out");
  return Guard([&] { *out = attreval::IoU({pred, n}, {truth, n}); });
}

aeval_status aeval_auc_iou(const double* taus, const double* ious, size_t n, double* out) {
  if (!taus || !ious || !out) return NullArg("taus/ious/out");
  return Guard([&] { *out = attreval::AucIoU({taus, n}, {ious, n}); });
}

aeval_status aeval_iou_curve(const aeval_grid* map, const aeval_mask* mask,
                             const double* taus, size_t n_taus, double* ious_out,
                             double* auc_out) {
  if (!map || !mask || !taus || !ious_out) return NullArg("map/mask/taus/ious_out");
  return Guard([&] {
    attreval::ThresholdGrid grid(std::vector<double>(taus, taus + n_taus));
    const attreval::IoUCurve c = attreval::ComputeIoUCurve(map->map, mask->mask, grid);
    std::copy(c.ious.begin(), c.ious.end(), ious_out);
    if (auc_out) *auc_out = c.auc;
  });
}

aeval_status aeval_wilcoxon(const double* diffs, size_t n, double* w_plus, double* p_value) {
  if (!diffs && n > 0) return NullArg("diffs");
  return Guard([&] {
    const auto r = attreval::WilcoxonSignedRank({diffs, n});
    if (w_plus) *w_plus = r.w_plus;
    if (p_value) *p_value = r.p_value;
  });
}

aeval_status aeval_holm(const double* p_values, size_t m, double alpha, double* adjusted_out,
                        int* reject_out) {
  if (!p_values && m > 0) return NullArg("p_values");
  return Guard([&] {
    const auto h = attreval::HolmBonferroni({p_values, m}, alpha);
    for (size_t i = 0; i < m; ++i) {
      if (adjusted_out) adjusted_out[i] = h.adjusted[i];
      if (reject_out) reject_out[i] = h.reject[i] ? 1 : 0;
    }
  });
}

aeval_status aeval_options_create(aeval_options** out) {
  if (!out) return NullArg("out");
  return Guard([&] { *out = new aeval_options{}; });
}

void aeval_options_free(aeval_options* options) { delete options; }

aeval_status aeval_options_set_thresholds(aeval_options* options, const char* spec) {
  if (!options || !spec) return NullArg("options/spec");
  return Guard([&] { options->config.grid = attreval::ThresholdGrid::Parse(spec); });
}

aeval_status aeval_options_set_alpha(aeval_options* options, double alpha) {
  if (!options) return NullArg("options");
  if (!(alpha > 0.0 && alpha < 1.0)) return SetError(AEVAL_ERR_DOMAIN, "alpha must be in (0,1)");
  options->config.alpha = alpha;
  return AEVAL_OK;
}

aeval_status aeval_options_set_strata_bounds(aeval_options* options, double small_max,
                                             double large_min) {
  if (!options) return NullArg("options");
  if (!(small_max <= large_min)) {
    return SetError(AEVAL_ERR_DOMAIN, "strata bounds need small_max <= large_min");
  }
  options->config.strata_bounds = attreval::StrataBounds{small_max, large_min};
  return AEVAL_OK;
}

aeval_status aeval_options_set_mask_threshold(aeval_options* options, int threshold) {
  if (!options) return NullArg("options");
  options->config.mask_threshold = threshold;
  return AEVAL_OK;
}

aeval_status aeval_options_set_workers(aeval_options* options, unsigned workers) {
  if (!options) return NullArg("options");
  options->config.workers = workers;
  return AEVAL_OK;
}

aeval_status aeval_evaluate(const char* manifest_path, const aeval_options* options,
                            aeval_result** out) {
  if (!manifest_path) return NullArg("manifest_path");
  if (!out) return NullArg("out");
  return Guard([&] {
    const attreval::AnalysisConfig config = options ? options->config : attreval::AnalysisConfig{};
    const auto manifest = attreval::LoadManifest(manifest_path);
    *out = new aeval_result{attreval::EvaluateStudy(manifest, config)};
  });
}

aeval_status aeval_result_load(const char* json_path, aeval_result** out) {
  if (!json_path) return NullArg("json_path");
  if (!out) return NullArg("out");
  return Guard([&] { *out = new aeval_result{attreval::LoadStudyResult(json_path)}; });
}

aeval_status aeval_result_write_reports(const aeval_result* result, const char* out_dir) {
  if (!result || !out_dir) return NullArg("result/out_dir");
  return Guard([&] { attreval::EmitReports(result->result, out_dir); });
}

aeval_status aeval_result_to_json(const aeval_result* result, char** out) {
  if (!result || !out) return NullArg("result/out");
  return Guard([&] { *out = CopyString(attreval::StudyResultToJson(result->result)); });
}

aeval_status aeval_result_method_count(const aeval_result* result, size_t* out) {
  if (!result || !out) return NullArg("result/out");
  *out = result->result.method_results.size();
  return AEVAL_OK;
}

aeval_status aeval_result_auc_mean(const aeval_result* result, const char* method_id,
                                   double* out) {
  if (!result || !method_id || !out) return NullArg("result/method_id/out");
  return Guard([&] { *out = result->result.Method(method_id).auc_mean; });
}

aeval_status aeval_result_rank(const aeval_result* result, const char* criterion, char** out) {
  if (!result || !criterion || !out) return NullArg("result/criterion/out");
  return Guard([&] { *out = CopyString(attreval::RenderRanking(result->result, criterion)); });
}

aeval_status aeval_results_compare(const aeval_result* const* results,
                                   const char* const* labels, size_t n, char** out) {
  if ((!results || !labels) && n > 0) return NullArg("results/labels");
  if (!out) return NullArg("out");
  return Guard([&] {
    std::vector<attreval::StudyResult> rs;
    std::vector<std::string> ls;
    for (size_t i = 0; i < n; ++i) {
      if (!results[i] || !labels[i]) {
        throw attreval::Error(attreval::ErrorCode::kValidation, "null result or label");
      }
      rs.push_back(results[i]->result);
      ls.emplace_back(labels[i]);
    }
    *out = CopyString(attreval::RenderComparison(rs, ls));
  });
}

void aeval_result_free(aeval_result* result) { delete result; }

aeval_status aeval_synth_generate(const char* spec_json_path, const char* out_dir,
                                  int has_seed, uint64_t seed) {
  if (!spec_json_path || !out_dir) return NullArg("spec_json_path/out_dir");
  return Guard([&] {
    attreval::StudySpec spec = attreval::LoadStudySpec(spec_json_path);
    if (has_seed) spec.seed = seed;
    attreval::GenerateStudy(spec, out_dir);
  });
}

}  // extern "C"
