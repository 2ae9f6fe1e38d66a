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

// Controllability scoring: per-feature L1 errors, the cross-baseline error
// matrix with min/P95 normalization, and the REINFORCE-style reward.

#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lingctl/controls.hpp"
#include "lingctl/extract.hpp"

namespace lingctl {

struct FeatureError {
  Feature feature;
  double error = 0;
};

// |response_i - target_i| for each feature i in the control vector, in the
// control vector's order.
std::vector<FeatureError> l1_error(const ControlVector& target, const FeatureVector& response);

// Extracts the response first; an unusable response raises
// kExtractionFailed.
std::vector<FeatureError> l1_error(const ControlVector& target, std::string_view response,
                                   const FeatureExtractor& extractor);

struct NormalizationParams {
  double min = 0;
  double p95 = 0;
};

// Maps e to (e - min) / (p95 - min) clamped to [0, 1]. Throws
// kDegenerateScale when min == p95.
double normalize_error(double e, const NormalizationParams& params);

// Raw L1 errors per feature and baseline. Rows are ragged: a baseline only
// has errors for tasks whose control subset contained the feature.
class ErrorMatrix {
 public:
  // Returns the baseline's index; repeated names share an index.
  std::size_t add_baseline(const std::string& name);

  void add(Feature f, std::size_t baseline, double error);

  const std::vector<std::string>& baselines() const { return baselines_; }
  const std::vector<double>& row(Feature f, std::size_t baseline) const;
  // Every error recorded for f across all baselines.
  std::vector<double> pooled(Feature f) const;
  bool has_errors(Feature f) const;

  // min over all baselines and the 95th percentile of the pooled errors.
  // Throws kEmptyRow when the feature has no errors.
  NormalizationParams normalization(Feature f) const;

 private:
  std::vector<std::string> baselines_;
  std::array<std::vector<std::vector<double>>, kNumFeatures> rows_;
};

// Same shape as the input with every entry normalized with its feature's
// params. Features without errors stay empty; kDegenerateScale propagates.
ErrorMatrix normalize_errors(const ErrorMatrix& matrix);

// Mean normalized error of one baseline on one feature. Throws kEmptyRow
// for an empty row and kDegenerateScale for a degenerate feature.
double baseline_feature_score(const ErrorMatrix& matrix, Feature f, std::size_t baseline);

// Per-feature training-set range (min, max).
struct RewardStats {
  std::array<std::pair<double, double>, kNumFeatures> range{};

  static RewardStats from(const StandardizationStats& stats);
};

// -(1/|C|) * sum over C of |response_i - target_i| / (max_i - min_i).
// Throws kDegenerateScale when a range in C is empty and kInvalidArgument
// for an empty subset.
double reinforce_reward(const FeatureVector& target, const FeatureVector& response, const ControlSubset& subset,
                        const RewardStats& stats);

double reinforce_reward(const FeatureVector& target, std::string_view response, const ControlSubset& subset,
                        const RewardStats& stats, const FeatureExtractor& extractor);

}  // namespace lingctl
