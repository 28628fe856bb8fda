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

#include "attreval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "attreval/error.hpp"
#include "json.hpp"

namespace attreval {

using nlohmann::json;

namespace {

json Opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> OptFrom(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json TestToJson(const PairwiseTestResult& t) {
  return {{"label_a", t.label_a},         {"label_b", t.label_b},
          {"w_statistic", t.w_statistic}, {"p_raw", t.p_raw},
          {"p_adjusted", t.p_adjusted},   {"effect_size", t.effect_size},
          {"significant", t.significant}, {"degenerate", t.degenerate},
          {"n_used", t.n_used},           {"n_zero_dropped", t.n_zero_dropped}};
}

PairwiseTestResult TestFromJson(const json& j) {
  PairwiseTestResult t;
  t.label_a = j.at("label_a").get<std::string>();
  t.label_b = j.at("label_b").get<std::string>();
  t.w_statistic = j.at("w_statistic").get<double>();
  t.p_raw = j.at("p_raw").get<double>();
  t.p_adjusted = j.at("p_adjusted").get<double>();
  t.effect_size = j.at("effect_size").get<double>();
  t.significant = j.at("significant").get<bool>();
  t.degenerate = j.at("degenerate").get<bool>();
  t.n_used = j.at("n_used").get<std::size_t>();
  t.n_zero_dropped = j.at("n_zero_dropped").get<std::size_t>();
  return t;
}

json RanksToJson(const std::map<std::string, int>& r) {
  json j = json::object();
  for (const auto& [k, v] : r) j[k] = v;
  return j;
}

std::map<std::string, int> RanksFromJson(const json& j) {
  std::map<std::string, int> r;
  for (auto it = j.begin(); it != j.end(); ++it) r[it.key()] = it->get<int>();
  return r;
}

std::string Fmt(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string Score(double v) { return Fmt("%.4f", v); }
std::string Score(const std::optional<double>& v) { return v ? Score(*v) : "n/a"; }
std::string Percent(const std::optional<double>& v) { return v ? Fmt("%+.1f%%", *v) : "n/a"; }
std::string PValue(double p) { return Fmt("%.3g", p); }
std::string TauText(double tau) { return Fmt("%.2f", tau); }

// Shortest round-trip representation.
std::string Num(double v) { return json(v).dump(); }

}  // namespace

std::string StudyResultToJson(const StudyResult& r) {
  json j;
  j["tool_version"] = r.tool_version;
  j["study_name"] = r.study_name;
  j["manifest_fingerprint"] = r.manifest_fingerprint;
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  j["config"] = {{"taus", r.taus},
                 {"alpha", r.alpha},
                 {"ci_level", r.ci_level},
                 {"mask_threshold", r.mask_threshold},
                 {"comparator", r.comparator},
                 {"taus_of_interest", r.taus_of_interest},
                 {"strata_bounds",
                  {{"small_max", r.strata.bounds.small_max},
                   {"large_min", r.strata.bounds.large_min},
                   {"explicit", r.strata.explicit_bounds}}}};
  j["methods"] = r.methods;

  json methods = json::array();
  for (const auto& m : r.method_results) {
    json per_image = json::array();
    for (std::size_t i = 0; i < m.per_image.size(); ++i) {
      per_image.push_back({{"image_id", m.image_ids[i]},
                           {"ious", m.per_image[i].ious},
                           {"auc", m.per_image[i].auc},
                           {"auc_raw", m.per_image[i].auc_raw}});
    }
    methods.push_back({{"method_id", m.method_id},
                       {"n_images", m.per_image.size()},
                       {"auc_mean", m.auc_mean},
                       {"auc_std", m.auc_std},
                       {"ci", {{"mean", m.ci.mean},
                               {"half_width", m.ci.half_width},
                               {"level", m.ci.level},
                               {"degenerate", m.ci_degenerate}}},
                       {"per_tau_mean", m.per_tau_mean},
                       {"per_tau_std", m.per_tau_std},
                       {"per_image", per_image}});
  }
  j["method_results"] = methods;

  json pairwise = json::array();
  for (const auto& t : r.pairwise) pairwise.push_back(TestToJson(t));
  j["pairwise"] = pairwise;

  json bias = json::array();
  for (const auto& b : r.bias_rows) {
    json rel = json::array();
    for (const auto& v : b.rel_diff_at) rel.push_back(Opt(v));
    json tests = json::array();
    for (const auto& t : b.tests) tests.push_back(TestToJson(t));
    bias.push_back({{"method_id", b.method_id},
                    {"auc_mean", b.auc_mean},
                    {"taus_of_interest", b.taus_of_interest},
                    {"iou_at", b.iou_at},
                    {"rel_diff_at", rel},
                    {"swing", Opt(b.swing)},
                    {"grid_taus", b.grid_taus},
                    {"tests", tests}});
  }
  j["bias_rows"] = bias;

  json strata = json::array();
  for (const auto& s : r.strata.strata) {
    strata.push_back({{"name", s.name},
                      {"lower_bound", s.lower_bound},
                      {"upper_bound", s.upper_bound},
                      {"image_ids", s.image_ids}});
  }
  j["strata"] = {{"strata", strata},
                 {"small_max", r.strata.bounds.small_max},
                 {"large_min", r.strata.bounds.large_min},
                 {"explicit_bounds", r.strata.explicit_bounds},
                 {"degenerate", r.strata.degenerate}};

  json stratified = json::array();
  for (const auto& s : r.stratified) {
    json per = json::array();
    for (const auto& st : s.strata) {
      per.push_back({{"name", st.name}, {"n", st.n}, {"mean", Opt(st.mean)}, {"std", Opt(st.std)}});
    }
    stratified.push_back({{"method_id", s.method_id},
                          {"strata", per},
                          {"improvement", Opt(s.improvement)},
                          {"trend_slope", Opt(StratumTrendSlope(s))}});
  }
  j["stratified"] = stratified;

  json rankings = json::array();
  for (const auto& rc : r.rankings) {
    json rev = json::array();
    for (const auto& [a, b] : rc.reversals) rev.push_back({a, b});
    rankings.push_back({{"criterion_a", rc.criterion_a},
                        {"criterion_b", rc.criterion_b},
                        {"rank_a", RanksToJson(rc.rank_a)},
                        {"rank_b", RanksToJson(rc.rank_b)},
                        {"ties_a", rc.ties_a},
                        {"ties_b", rc.ties_b},
                        {"reversals", rev}});
  }
  j["rankings"] = rankings;
  return j.dump(1) + "\n";
}

StudyResult StudyResultFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kFormat, std::string("study result: invalid JSON: ") + e.what());
  }
  try {
    StudyResult r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.study_name = j.at("study_name").get<std::string>();
    r.manifest_fingerprint = j.at("manifest_fingerprint").get<std::string>();
    if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
    const json& cfg = j.at("config");
    r.taus = cfg.at("taus").get<std::vector<double>>();
    r.alpha = cfg.at("alpha").get<double>();
    r.ci_level = cfg.at("ci_level").get<double>();
    r.mask_threshold = cfg.at("mask_threshold").get<int>();
    r.comparator = cfg.at("comparator").get<std::string>();
    r.taus_of_interest = cfg.at("taus_of_interest").get<std::vector<double>>();
    r.methods = j.at("methods").get<std::vector<std::string>>();

    for (const auto& m : j.at("method_results")) {
      MethodEvalResult mr;
      mr.method_id = m.at("method_id").get<std::string>();
      mr.auc_mean = m.at("auc_mean").get<double>();
      mr.auc_std = m.at("auc_std").get<double>();
      const json& ci = m.at("ci");
      mr.ci.mean = ci.at("mean").get<double>();
      mr.ci.half_width = ci.at("half_width").get<double>();
      mr.ci.level = ci.at("level").get<double>();
      mr.ci_degenerate = ci.at("degenerate").get<bool>();
      mr.per_tau_mean = m.at("per_tau_mean").get<std::vector<double>>();
      mr.per_tau_std = m.at("per_tau_std").get<std::vector<double>>();
      for (const auto& pi : m.at("per_image")) {
        mr.image_ids.push_back(pi.at("image_id").get<std::string>());
        IoUCurve c;
        c.taus = r.taus;
        c.ious = pi.at("ious").get<std::vector<double>>();
        c.auc = pi.at("auc").get<double>();
        c.auc_raw = pi.at("auc_raw").get<double>();
        mr.per_image.push_back(std::move(c));
      }
      r.method_results.push_back(std::move(mr));
    }
    for (const auto& t : j.at("pairwise")) r.pairwise.push_back(TestFromJson(t));
    for (const auto& b : j.at("bias_rows")) {
      ThresholdBiasRow row;
      row.method_id = b.at("method_id").get<std::string>();
      row.auc_mean = b.at("auc_mean").get<double>();
      row.taus_of_interest = b.at("taus_of_interest").get<std::vector<double>>();
      row.iou_at = b.at("iou_at").get<std::vector<double>>();
      for (const auto& v : b.at("rel_diff_at")) row.rel_diff_at.push_back(OptFrom(v));
      row.swing = OptFrom(b.at("swing"));
      row.grid_taus = b.at("grid_taus").get<std::vector<double>>();
      for (const auto& t : b.at("tests")) row.tests.push_back(TestFromJson(t));
      r.bias_rows.push_back(std::move(row));
    }
    const json& st = j.at("strata");
    r.strata.bounds.small_max = st.at("small_max").get<double>();
    r.strata.bounds.large_min = st.at("large_min").get<double>();
    r.strata.explicit_bounds = st.at("explicit_bounds").get<bool>();
    r.strata.degenerate = st.at("degenerate").get<bool>();
    for (const auto& s : st.at("strata")) {
      SizeStratum ss;
      ss.name = s.at("name").get<std::string>();
      ss.lower_bound = s.at("lower_bound").get<double>();
      ss.upper_bound = s.at("upper_bound").get<double>();
      ss.image_ids = s.at("image_ids").get<std::vector<std::string>>();
      r.strata.strata.push_back(std::move(ss));
    }
    for (const auto& s : j.at("stratified")) {
      StratifiedResult sr;
      sr.method_id = s.at("method_id").get<std::string>();
      for (const auto& p : s.at("strata")) {
        StratumStats ss;
        ss.name = p.at("name").get<std::string>();
        ss.n = p.at("n").get<std::size_t>();
        ss.mean = OptFrom(p.at("mean"));
        ss.std = OptFrom(p.at("std"));
        sr.strata.push_back(std::move(ss));
      }
      sr.improvement = OptFrom(s.at("improvement"));
      r.stratified.push_back(std::move(sr));
    }
    for (const auto& rc : j.at("rankings")) {
      RankingComparison c;
      c.criterion_a = rc.at("criterion_a").get<std::string>();
      c.criterion_b = rc.at("criterion_b").get<std::string>();
      c.rank_a = RanksFromJson(rc.at("rank_a"));
      c.rank_b = RanksFromJson(rc.at("rank_b"));
      c.ties_a = rc.at("ties_a").get<bool>();
      c.ties_b = rc.at("ties_b").get<bool>();
      for (const auto& p : rc.at("reversals")) {
        c.reversals.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
      }
      r.rankings.push_back(std::move(c));
    }
    return r;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kValidation, std::string("study result: malformed document: ") + e.what());
  }
}

StudyResult LoadStudyResult(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  try {
    return StudyResultFromJson(std::string(bytes.begin(), bytes.end()));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string SignificanceStars(double p_adjusted) {
  if (p_adjusted < 0.001) return "***";
  if (p_adjusted < 0.01) return "**";
  if (p_adjusted < 0.05) return "*";
  return "ns";
}

namespace {

std::vector<const MethodEvalResult*> ByMeanDescending(const StudyResult& r) {
  std::vector<const MethodEvalResult*> out;
  for (const auto& m : r.method_results) out.push_back(&m);
  std::stable_sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    if (a->auc_mean != b->auc_mean) return a->auc_mean > b->auc_mean;
    return a->method_id < b->method_id;
  });
  return out;
}

std::string TestMarker(const PairwiseTestResult& t) {
  return t.degenerate ? "ns (degenerate)" : SignificanceStars(t.p_adjusted);
}

}  // namespace

std::string RenderReportMarkdown(const StudyResult& r) {
  std::ostringstream md;
  md << "# Attribution evaluation report: " << r.study_name << "\n\n";

  md << "## Metadata\n\n";
  md << "| Field | Value |\n|---|---|\n";
  md << "| Tool version | " << r.tool_version << " |\n";
  md << "| Manifest fingerprint | " << r.manifest_fingerprint << " |\n";
  md << "| Seed | " << (r.seed ? std::to_string(*r.seed) : "n/a") << " |\n";
  md << "| Thresholds | " << r.taus.size() << " from " << Num(r.taus.front()) << " to "
     << Num(r.taus.back()) << " |\n";
  md << "| Binarization | value " << r.comparator << " tau after min-max normalization |\n";
  md << "| Alpha (family-wise) | " << Num(r.alpha) << " |\n";
  md << "| CI level | " << Num(r.ci_level) << " |\n";
  md << "| Mask threshold | intensity > " << r.mask_threshold << " |\n";
  md << "| Strata bounds | small <= " << Num(r.strata.bounds.small_max) << ", large >= "
     << Num(r.strata.bounds.large_min)
     << (r.strata.explicit_bounds ? " (explicit)" : " (33rd/67th percentiles)")
     << (r.strata.degenerate ? ", degenerate" : "") << " |\n\n";

  md << "## Method performance\n\n";
  md << "| Method | Mean AUC-IoU | Std Dev | " << Fmt("%.0f", r.ci_level * 100)
     << "% CI | n |\n|---|---|---|---|---|\n";
  for (const auto* m : ByMeanDescending(r)) {
    md << "| " << m->method_id << " | " << Score(m->auc_mean) << " | " << Score(m->auc_std)
       << " | " << (m->ci_degenerate ? "n/a" : "±" + Score(m->ci.half_width)) << " | "
       << m->per_image.size() << " |\n";
  }
  md << "\n";

  md << "## Pairwise significance\n\n";
  md << "Wilcoxon signed-rank on per-image AUC-IoU differences (A - B), Holm-Bonferroni over "
     << r.pairwise.size() << " tests.\n\n";
  md << "| Comparison | W+ | p (raw) | p (Holm) | Effect size | Significance |\n"
        "|---|---|---|---|---|---|\n";
  for (const auto& t : r.pairwise) {
    md << "| " << t.label_a << " vs. " << t.label_b << " | " << Fmt("%.1f", t.w_statistic)
       << " | " << PValue(t.p_raw) << " | " << PValue(t.p_adjusted) << " | "
       << Score(t.effect_size) << " | " << TestMarker(t) << " |\n";
  }
  md << "\n";

  md << "## Performance by lesion size\n\n";
  md << "| Method";
  if (!r.stratified.empty()) {
    for (const auto& st : r.stratified.front().strata) {
      md << " | " << st.name << " (n=" << st.n << ")";
    }
  }
  md << " | Improvement |\n|---|";
  if (!r.stratified.empty()) {
    for (std::size_t i = 0; i < r.stratified.front().strata.size(); ++i) md << "---|";
  }
  md << "---|\n";
  for (const auto* m : ByMeanDescending(r)) {
    for (const auto& s : r.stratified) {
      if (s.method_id != m->method_id) continue;
      md << "| " << s.method_id;
      for (const auto& st : s.strata) {
        md << " | " << Score(st.mean) << " ± " << Score(st.std);
      }
      md << " | " << (s.improvement ? Fmt("%.1f%%", *s.improvement) : "n/a") << " |\n";
    }
  }
  md << "\n";

  md << "## Threshold-free vs single-threshold\n\n";
  md << "Relative difference = (AUC-IoU - IoU(tau)) / IoU(tau) x 100; markers from the "
     << r.bias_rows.size() * (r.bias_rows.empty() ? 0 : r.bias_rows.front().tests.size())
     << "-test Holm family comparing per-image AUC-IoU with IoU(tau).\n\n";
  md << "| Method | AUC-IoU";
  for (double tau : r.taus_of_interest) {
    md << " | IoU@" << TauText(tau) << " | Rel. Diff.";
  }
  md << " | Swing (pp) |\n|---|---|";
  for (std::size_t i = 0; i < r.taus_of_interest.size(); ++i) md << "---|---|";
  md << "---|\n";
  std::map<std::string, const ThresholdBiasRow*> bias_by_id;
  for (const auto& b : r.bias_rows) bias_by_id[b.method_id] = &b;
  for (const auto* m : ByMeanDescending(r)) {
    auto it = bias_by_id.find(m->method_id);
    if (it == bias_by_id.end()) continue;
    const ThresholdBiasRow& b = *it->second;
    md << "| " << b.method_id << " | " << Score(b.auc_mean);
    for (std::size_t k = 0; k < b.taus_of_interest.size(); ++k) {
      std::string marker;
      for (std::size_t t = 0; t < b.grid_taus.size(); ++t) {
        if (std::abs(b.grid_taus[t] - b.taus_of_interest[k]) < 1e-9) {
          marker = TestMarker(b.tests[t]);
        }
      }
      md << " | " << Score(b.iou_at[k]) << " | " << Percent(b.rel_diff_at[k]) << " " << marker;
    }
    md << " | " << (b.swing ? Fmt("%.1f", *b.swing) : "n/a") << " |\n";
  }
  md << "\n";

  md << "## Ranking stability\n\n";
  for (const auto& rc : r.rankings) {
    md << "- " << rc.criterion_a << " vs " << rc.criterion_b << ": ";
    if (rc.reversals.empty()) {
      md << "no reversals";
    } else {
      md << rc.reversals.size() << " reversal(s):";
      for (const auto& [a, b] : rc.reversals) md << " " << a << "/" << b;
    }
    if (rc.ties_a || rc.ties_b) md << " (ties broken by method id)";
    md << "\n";
  }
  return md.str();
}

std::string RenderCurvesCsv(const StudyResult& r) {
  std::ostringstream csv;
  csv << "method,tau,mean_iou,std_iou\r\n";
  for (const auto& m : r.method_results) {
    std::string id = m.method_id;
    if (id.find_first_of(",\"\r\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : id) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      id = q + "\"";
    }
    for (std::size_t t = 0; t < r.taus.size(); ++t) {
      csv << id << "," << Num(r.taus[t]) << "," << Num(m.per_tau_mean[t]) << ","
          << Num(m.per_tau_std[t]) << "\r\n";
    }
  }
  return csv.str();
}

ReportBundle EmitReports(const StudyResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create output directory " + out_dir.string());
  ReportBundle b{out_dir / "report.md", out_dir / "study_result.json", out_dir / "curves.csv"};
  WriteTextFile(b.report_md, RenderReportMarkdown(result));
  WriteTextFile(b.study_result_json, StudyResultToJson(result));
  WriteTextFile(b.curves_csv, RenderCurvesCsv(result));
  return b;
}

std::string RenderRanking(const StudyResult& r, const std::string& criterion) {
  std::map<std::string, double> auc;
  for (const auto& m : r.method_results) auc[m.method_id] = m.auc_mean;
  std::map<std::string, double> scores;
  std::string label;
  if (criterion == "auc") {
    scores = auc;
    label = "AUC-IoU";
  } else if (criterion.rfind("iou@", 0) == 0) {
    double tau = 0.0;
    try {
      std::size_t used = 0;
      tau = std::stod(criterion.substr(4), &used);
      if (used != criterion.size() - 4) throw std::invalid_argument("tau");
    } catch (const std::logic_error&) {
      Fail(ErrorCode::kValidation, "bad criterion '" + criterion + "'");
    }
    std::ptrdiff_t idx = -1;
    for (std::size_t t = 0; t < r.taus.size(); ++t) {
      if (std::abs(r.taus[t] - tau) < 1e-9) idx = static_cast<std::ptrdiff_t>(t);
    }
    if (idx < 0) Fail(ErrorCode::kValidation, "threshold " + criterion.substr(4) + " is not on the result's grid");
    for (const auto& m : r.method_results) {
      scores[m.method_id] = m.per_tau_mean[static_cast<std::size_t>(idx)];
    }
    label = "IoU@" + TauText(tau);
  } else {
    Fail(ErrorCode::kValidation, "criterion must be 'auc' or 'iou@<tau>', got '" + criterion + "'");
  }
  bool ties = false;
  const auto ranks = RankDescending(scores, &ties);
  std::vector<std::pair<int, std::string>> ordered;
  for (const auto& [id, rank] : ranks) ordered.emplace_back(rank, id);
  std::sort(ordered.begin(), ordered.end());

  std::ostringstream out;
  out << "| Rank | Method | " << label << " |\n|---|---|---|\n";
  for (const auto& [rank, id] : ordered) {
    out << "| " << rank << " | " << id << " | " << Score(scores.at(id)) << " |\n";
  }
  if (ties) out << "\nTies broken by method id.\n";
  if (criterion != "auc") {
    const RankingComparison rc = CompareRankings("AUC-IoU", auc, label, scores);
    out << "\nReversals against AUC-IoU: ";
    if (rc.reversals.empty()) out << "none";
    for (std::size_t i = 0; i < rc.reversals.size(); ++i) {
      out << (i ? ", " : "") << rc.reversals[i].first << "/" << rc.reversals[i].second;
    }
    out << "\n";
  }
  return out.str();
}

std::string RenderComparison(const std::vector<StudyResult>& results,
                             const std::vector<std::string>& labels) {
  if (results.size() != labels.size()) Fail(ErrorCode::kValidation, "one label per result required");
  std::set<std::string> methods;
  for (const auto& r : results) {
    for (const auto& m : r.method_results) methods.insert(m.method_id);
  }
  std::ostringstream out;
  out << "| Method";
  for (const auto& l : labels) out << " | " << l;
  out << " |\n|---|";
  for (std::size_t i = 0; i < labels.size(); ++i) out << "---|";
  out << "\n";
  for (const auto& id : methods) {
    out << "| " << id;
    for (const auto& r : results) {
      std::string cell = "n/a";
      std::map<std::string, double> auc;
      for (const auto& m : r.method_results) auc[m.method_id] = m.auc_mean;
      if (auc.count(id)) {
        cell = Score(auc[id]) + " (#" + std::to_string(RankDescending(auc).at(id)) + ")";
      }
      out << " | " << cell;
    }
    out << " |\n";
  }
  return out.str();
}

}  // namespace attreval
