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

#ifndef ATTREVAL_REPORT_HPP_
#define ATTREVAL_REPORT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "attreval/eval_engine.hpp"

namespace attreval {

// Full machine-readable result with sorted keys; optional values are null.
std::string StudyResultToJson(const StudyResult& result);
StudyResult StudyResultFromJson(const std::string& text);
StudyResult LoadStudyResult(const std::filesystem::path& path);

// Significance marker on an adjusted p-value: ***, **, * or ns.
std::string SignificanceStars(double p_adjusted);

std::string RenderReportMarkdown(const StudyResult& result);
// Long format: method,tau,mean_iou,std_iou, one row per method per threshold.
std::string RenderCurvesCsv(const StudyResult& result);

struct ReportBundle {
  std::filesystem::path report_md;
  std::filesystem::path study_result_json;
  std::filesystem::path curves_csv;
};

ReportBundle EmitReports(const StudyResult& result, const std::filesystem::path& out_dir);

// criterion: "auc" or "iou@<tau>" with tau on the result's grid.
std::string RenderRanking(const StudyResult& result, const std::string& criterion);

// Mean AUC-IoU per method, one column per result.
std::string RenderComparison(const std::vector<StudyResult>& results,
                             const std::vector<std::string>& labels);

}  // namespace attreval

#endif  // ATTREVAL_REPORT_HPP_
