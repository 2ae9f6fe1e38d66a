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

// Control-vector algebra: validity rules, standardization, Gaussian
// rejection sampling of target vectors and random control subsets.

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lingctl/features.hpp"

namespace lingctl {

// Validity rules in evaluation order.
enum class Rule {
  kWordPositive,
  kWordCoversPos,
  kWordCoversUnique,
  kNounNonNegative,
  kNounCoversUnique,
  kVerbNonNegative,
  kVerbCoversUnique,
  kAdjNonNegative,
  kAdjCoversUnique,
  kUniquePositive,
  kUniqueCoversPos,
  kUniqueNounNonNegative,
  kUniqueVerbNonNegative,
  kUniqueAdjNonNegative,
  kFkreBound,
};

inline constexpr std::size_t kNumRules = 15;

// Human-readable rule identifier, e.g. "t_word >= t_uword".
std::string_view rule_name(Rule rule);

struct ValidityReport {
  std::vector<Rule> violations;

  bool valid() const { return violations.empty(); }
};

ValidityReport validate(const FeatureVector& v);
inline bool is_valid(const FeatureVector& v) { return validate(v).valid(); }

struct FeatureStats {
  double mean = 0;
  double std = 1;  // sample standard deviation
  double min = 0;
  double max = 0;
};

struct StandardizationStats {
  std::array<FeatureStats, kNumFeatures> features{};
  std::size_t count = 0;
  std::string source;

  const FeatureStats& operator[](Feature f) const { return features[index_of(f)]; }
};

// Throws kInsufficientData for fewer than two vectors and
// kDegenerateFeature when a feature is constant.
StandardizationStats fit_stats(std::span<const FeatureVector> vectors, std::string source = {});

using Standardized = std::array<double, kNumFeatures>;

Standardized standardize(const FeatureVector& v, const StandardizationStats& stats);

// Inverse of standardize. Integer features are rounded to the nearest
// integer and clamped at their lower bound; others are left as computed.
FeatureVector destandardize(const Standardized& u, const StandardizationStats& stats);

// Linear-interpolation percentile, p in [0, 100]. Throws on empty input.
double percentile(std::vector<double> values, double p);

using Rng = std::mt19937_64;

// Independent stream for one work item. Streams from the same seed are a
// pure function of the stream id, so results do not depend on scheduling.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

// center + sigma * eps, eps standard normal. One rejection-sampling draw
// before rounding and validation.
Standardized perturb(const Standardized& center, double sigma, Rng& rng);

inline constexpr int kDefaultMaxAttempts = 10000;

// Draws z^-1(z(reference) + sigma * eps) with eps standard normal until the
// rounded vector passes validate(). sigma == 0 returns the reference.
// Throws kInvalidArgument for an invalid reference or negative sigma and
// kSamplingExhausted after max_attempts rejections.
FeatureVector sample_control_vector(const FeatureVector& reference, double sigma,
                                    const StandardizationStats& stats, Rng& rng,
                                    int max_attempts = kDefaultMaxAttempts);

// Sorted set of distinct features.
class ControlSubset {
 public:
  ControlSubset() = default;
  // Sorts and deduplicates.
  explicit ControlSubset(std::vector<Feature> features);

  static const ControlSubset& all();

  const std::vector<Feature>& features() const { return features_; }
  std::size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }
  bool contains(Feature f) const;

  bool operator==(const ControlSubset&) const = default;

 private:
  std::vector<Feature> features_;
};

// n ~ Uniform{1..m}, then a uniformly random n-subset.
ControlSubset sample_subset(int m, Rng& rng);

// A uniformly random subset of exactly n features.
ControlSubset sample_subset_of_size(int n, Rng& rng);

struct ControlVector {
  std::vector<std::pair<Feature, double>> entries;

  ControlSubset subset() const;
  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }

  bool operator==(const ControlVector&) const = default;
};

ControlVector project(const FeatureVector& v, const ControlSubset& subset);

}  // namespace lingctl
