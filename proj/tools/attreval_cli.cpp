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

// attreval command-line front end. Talks to the library only through the C
// interface in attreval/attreval.h.

#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "attreval/attreval.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

int ExitCodeFor(aeval_status s) {
  switch (s) {
    case AEVAL_OK: return kExitOk;
    case AEVAL_ERR_IO:
    case AEVAL_ERR_RESOLUTION: return kExitIo;
    default: return kExitValidation;
  }
}

// Prints the library error for a failed call and maps it to an exit code.
int Report(aeval_status s) {
  if (s != AEVAL_OK) {
    std::cerr << "attreval: " << aeval_status_string(s) << ": " << aeval_last_error() << "\n";
  }
  return ExitCodeFor(s);
}

struct ResultDeleter {
  void operator()(aeval_result* r) const { aeval_result_free(r); }
};
struct OptionsDeleter {
  void operator()(aeval_options* o) const { aeval_options_free(o); }
};
using ResultPtr = std::unique_ptr<aeval_result, ResultDeleter>;
using OptionsPtr = std::unique_ptr<aeval_options, OptionsDeleter>;

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { aeval_string_free(s); }
};

bool ParseBounds(const std::string& text, double& a, double& b) {
  std::istringstream in(text);
  char comma = 0;
  if (!(in >> a >> comma >> b) || comma != ',') return false;
  std::string rest;
  return !(in >> rest);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold-free evaluation of attribution maps"};
  app.set_version_flag("--version", std::string(aeval_version()));
  app.require_subcommand(1);

  std::string manifest;
  std::string out_dir;
  std::string thresholds;
  std::string strata_bounds;
  double alpha = 0.05;
  int mask_threshold = 127;
  unsigned workers = 0;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a study manifest");
  evaluate->add_option("manifest", manifest, "Study manifest (JSON)")->required();
  evaluate->add_option("--out", out_dir, "Output directory")->required();
  evaluate->add_option("--thresholds", thresholds, "Threshold grid lo:hi:n (default 0.05:0.95:19)");
  evaluate->add_option("--strata-bounds", strata_bounds,
                       "Explicit size bounds small_max,large_min in pixels");
  evaluate->add_option("--alpha", alpha, "Family-wise error rate")->capture_default_str();
  evaluate->add_option("--mask-threshold", mask_threshold, "Mask positive iff intensity > value")
      ->capture_default_str();
  evaluate->add_option("--workers", workers, "Worker threads (0 = all cores)");

  std::string synth_spec;
  std::string synth_out;
  std::uint64_t seed = 0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic archetype study");
  synth->add_option("spec", synth_spec, "Synthetic study spec (JSON)")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();
  auto* seed_opt = synth->add_option("--seed", seed, "Override the spec's seed");

  std::vector<std::string> compare_files;
  auto* compare = app.add_subcommand("compare", "Compare mean AUC-IoU across result files");
  compare->add_option("results", compare_files, "study_result.json files")->required();

  std::string rank_file;
  std::string criterion = "auc";
  auto* rank = app.add_subcommand("rank", "Rank methods by a criterion");
  rank->add_option("result", rank_file, "study_result.json")->required();
  rank->add_option("--criterion", criterion, "auc or iou@<tau>")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (*evaluate) {
    aeval_options* raw_opts = nullptr;
    if (int rc = Report(aeval_options_create(&raw_opts))) return rc;
    OptionsPtr opts(raw_opts);
    if (!thresholds.empty()) {
      if (int rc = Report(aeval_options_set_thresholds(opts.get(), thresholds.c_str()))) return rc;
    }
    if (!strata_bounds.empty()) {
      double a = 0;
      double b = 0;
      if (!ParseBounds(strata_bounds, a, b)) {
        std::cerr << "attreval: --strata-bounds expects a,b\n";
        return kExitValidation;
      }
      if (int rc = Report(aeval_options_set_strata_bounds(opts.get(), a, b))) return rc;
    }
    if (int rc = Report(aeval_options_set_alpha(opts.get(), alpha))) return rc;
    if (int rc = Report(aeval_options_set_mask_threshold(opts.get(), mask_threshold))) return rc;
    if (int rc = Report(aeval_options_set_workers(opts.get(), workers))) return rc;

    aeval_result* raw = nullptr;
    if (int rc = Report(aeval_evaluate(manifest.c_str(), opts.get(), &raw))) return rc;
    ResultPtr result(raw);
    if (int rc = Report(aeval_result_write_reports(result.get(), out_dir.c_str()))) return rc;
    std::cout << "wrote " << out_dir << "/report.md, study_result.json, curves.csv\n";
    return kExitOk;
  }

  if (*synth) {
    const int has_seed = seed_opt->count() > 0 ? 1 : 0;
    if (int rc = Report(aeval_synth_generate(synth_spec.c_str(), synth_out.c_str(), has_seed, seed))) {
      return rc;
    }
    std::cout << "wrote " << synth_out << "/manifest.json\n";
    return kExitOk;
  }

  if (*compare) {
    std::vector<ResultPtr> owned;
    std::vector<const aeval_result*> results;
    std::vector<const char*> labels;
    for (const auto& f : compare_files) {
      aeval_result* raw = nullptr;
      if (int rc = Report(aeval_result_load(f.c_str(), &raw))) return rc;
      owned.emplace_back(raw);
      results.push_back(raw);
      labels.push_back(f.c_str());
    }
    OwnedString text;
    if (int rc = Report(aeval_results_compare(results.data(), labels.data(), results.size(), &text.s))) {
      return rc;
    }
    std::cout << text.s;
    return kExitOk;
  }

  if (*rank) {
    aeval_result* raw = nullptr;
    if (int rc = Report(aeval_result_load(rank_file.c_str(), &raw))) return rc;
    ResultPtr result(raw);
    OwnedString text;
    if (int rc = Report(aeval_result_rank(result.get(), criterion.c_str(), &text.s))) return rc;
    std::cout << text.s;
    return kExitOk;
  }
  return kExitValidation;
}
