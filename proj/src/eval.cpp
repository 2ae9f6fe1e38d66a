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

#include "lingctl/eval.hpp"

#include <algorithm>
#include <cmath>

#include "lingctl/errors.hpp"

namespace lingctl {

std::vector<FeatureError> l1_error(const ControlVector& target, const FeatureVector& response) {
  std::vector<FeatureError> out;
  out.reserve(target.size());
  for (const auto& [f, value] : target.entries) out.push_back({f, std::abs(response[f] - value)});
  return out;
}

std::vector<FeatureError> l1_error(const ControlVector& target, std::string_view response,
                                   const FeatureExtractor& extractor) {
  FeatureVector features;
  try {
    features = extractor.extract(response);
  } catch (const Error& e) {
    throw Error(ErrorKind::kExtractionFailed, std::string(to_string(e.kind())) + ": " + e.what());
  }
  return l1_error(target, features);
}

double normalize_error(double e, const NormalizationParams& params) {
  if (!(params.p95 > params.min)) {
    throw Error(ErrorKind::kDegenerateScale, "normalization range is empty");
  }
  return std::clamp((e - params.min) / (params.p95 - params.min), 0.0, 1.0);
}

std::size_t ErrorMatrix::add_baseline(const std::string& name) {
  auto it = std::find(baselines_.begin(), baselines_.end(), name);
  if (it != baselines_.end()) return static_cast<std::size_t>(it - baselines_.begin());
  baselines_.push_back(name);
  for (auto& rows : rows_) rows.emplace_back();
  return baselines_.size() - 1;
}

void ErrorMatrix::add(Feature f, std::size_t baseline, double error) {
  if (baseline >= baselines_.size()) throw Error(ErrorKind::kInvalidArgument, "unknown baseline index");
  if (!(error >= 0)) throw Error(ErrorKind::kInvalidArgument, "L1 errors must be non-negative");
  rows_[index_of(f)][baseline].push_back(error);
}

const std::vector<double>& ErrorMatrix::row(Feature f, std::size_t baseline) const {
  if (baseline >= baselines_.size()) throw Error(ErrorKind::kInvalidArgument, "unknown baseline index");
  return rows_[index_of(f)][baseline];
}

std::vector<double> ErrorMatrix::pooled(Feature f) const {
  std::vector<double> all;
  for (const auto& row : rows_[index_of(f)]) all.insert(all.end(), row.begin(), row.end());
  return all;
}

bool ErrorMatrix::has_errors(Feature f) const {
  const auto& rows = rows_[index_of(f)];
  return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return !r.empty(); });
}

NormalizationParams ErrorMatrix::normalization(Feature f) const {
  std::vector<double> all = pooled(f);
  if (all.empty()) throw Error(ErrorKind::kEmptyRow, "no errors recorded for " + std::string(name_of(f)));
  const double lo = *std::min_element(all.begin(), all.end());
  return {lo, percentile(std::move(all), 95.0)};
}

ErrorMatrix normalize_errors(const ErrorMatrix& matrix) {
  ErrorMatrix out;
  for (const auto& name : matrix.baselines()) out.add_baseline(name);
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    const Feature f = feature_at(i);
    if (!matrix.has_errors(f)) continue;
    const NormalizationParams params = matrix.normalization(f);
    for (std::size_t j = 0; j < matrix.baselines().size(); ++j) {
      for (double e : matrix.row(f, j)) out.add(f, j, normalize_error(e, params));
    }
  }
  return out;
}

double baseline_feature_score(const ErrorMatrix& matrix, Feature f, std::size_t baseline) {
  const auto& row = matrix.row(f, baseline);
  if (row.empty()) {
    throw Error(ErrorKind::kEmptyRow, "baseline '" + matrix.baselines()[baseline] + "' has no errors for " +
                                          std::string(name_of(f)));
  }
  const NormalizationParams params = matrix.normalization(f);
  double sum = 0;
  for (double e : row) sum += normalize_error(e, params);
  return sum / static_cast<double>(row.size());
}

RewardStats RewardStats::from(const StandardizationStats& stats) {
  RewardStats r;
  for (std::size_t i = 0; i < kNumFeatures; ++i) r.range[i] = {stats.features[i].min, stats.features[i].max};
  return r;
}

double reinforce_reward(const FeatureVector& target, const FeatureVector& response, const ControlSubset& subset,
                        const RewardStats& stats) {
  if (subset.empty()) throw Error(ErrorKind::kInvalidArgument, "reward needs at least one control");
  double total = 0;
  for (Feature f : subset.features()) {
    const auto [lo, hi] = stats.range[index_of(f)];
    if (!(hi > lo)) {
      throw Error(ErrorKind::kDegenerateScale, "empty training range for " + std::string(name_of(f)));
    }
    total += std::abs(response[f] - target[f]) / (hi - lo);
  }
  return -total / static_cast<double>(subset.size());
}

double reinforce_reward(const FeatureVector& target, std::string_view response, const ControlSubset& subset,
                        const RewardStats& stats, const FeatureExtractor& extractor) {
  FeatureVector features;
  try {
    features = extractor.extract(response);
  } catch (const Error& e) {
    throw Error(ErrorKind::kExtractionFailed, std::string(to_string(e.kind())) + ": " + e.what());
  }
  return reinforce_reward(target, features, subset, stats);
}

}  // namespace lingctl
