// Copyright 2026 The lingctl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reports built from response ledgers: per-baseline feature scores, the
// radar bundle, and the n / sigma sweeps.

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lingctl/dataset.hpp"
#include "lingctl/eval.hpp"
#include "lingctl/modelclient.hpp"

namespace lingctl {

struct BaselineRun {
  std::string name;
  std::vector<EvalTask> tasks;
  std::vector<CompletionRecord> records;
};

// One scored (task, k) pair.
struct ScoredRecord {
  std::size_t baseline = 0;
  std::size_t task = 0;
  int k = 0;
  // Raw L1 errors over the task's controls; empty when the record failed.
  std::vector<FeatureError> errors;
  bool failed = false;
};

// Like normalize_error, but a feature whose pooled errors are all equal
// (min == p95) maps e to 0 when e equals the minimum and 1 otherwise. That
// keeps reports defined for perfect or constant baselines.
double report_normalize(double e, const NormalizationParams& params);

struct Report {
  std::vector<std::string> baselines;
  ErrorMatrix raw;
  std::vector<ScoredRecord> records;
  std::array<std::optional<NormalizationParams>, kNumFeatures> normalization{};
  // scores[baseline][feature]; empty where the baseline has no errors.
  std::vector<std::array<std::optional<double>, kNumFeatures>> scores;
  std::vector<std::size_t> failed;
};

// Scores every (task, k) of every run against its ledger. A ledger missing
// any key raises kIncompleteLedger listing the keys; records holding an
// error or a response that cannot be extracted count as failed.
Report build_report(std::span<const BaselineRun> runs, const FeatureExtractor& extractor, int jobs = 1);

// CSV: baseline,feature,score,errors
std::string scores_csv(const Report& r);
// CSV: feature,min,p95
std::string normalization_csv(const Report& r);
// CSV: baseline,task_id,k,feature,error (failed records have no rows)
std::string errors_csv(const Report& r, std::span<const BaselineRun> runs);
// {"features":[14 names], "baselines":[{"name","scores":[14]}],
//  "normalization":{"min":[14],"p95":[14]}}; unscored entries are null.
Json radar_json(const Report& r);

// Writes scores.csv, normalization.csv, errors.csv and radar.json.
void write_report(const std::filesystem::path& dir, const Report& r, std::span<const BaselineRun> runs);

enum class SweepKind { kN, kSigma };

struct NSweepRow {
  int n = 0;
  std::size_t examples = 0;
  double mean = 0;
  double ci_low = 0;
  double ci_high = 0;
};

struct SigmaSweepRow {
  double sigma = 0;
  std::array<std::optional<double>, kNumFeatures> scores{};
};

struct SweepReport {
  SweepKind kind = SweepKind::kN;
  // The underlying report, one "baseline" per sweep point.
  Report report;
  std::vector<NSweepRow> n_rows;
  std::vector<SigmaSweepRow> sigma_rows;
};

// Each run is one sweep point. For kN the point is the control-subset size
// shared by all its tasks and every n in 1..14 must be present exactly once;
// for kSigma it is the tasks' sigma. Errors are normalized over all points.
// n rows carry the mean over examples of each example's mean normalized
// error, with a normal-approximation 95% interval.
SweepReport sweep_report(SweepKind kind, std::span<const BaselineRun> runs, const FeatureExtractor& extractor,
                         int jobs = 1);

std::string sweep_csv(const SweepReport& s);
Json sweep_json(const SweepReport& s);
void write_sweep(const std::filesystem::path& dir, const SweepReport& s);

}  // namespace lingctl
