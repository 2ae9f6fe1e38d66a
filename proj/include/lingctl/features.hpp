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

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace lingctl {

// The fourteen controllable features, numbered by their canonical id.
enum class Feature : int {
  kTWord = 1,
  kNNoun,
  kNVerb,
  kNAdj,
  kTUword,
  kNUnoun,
  kNUverb,
  kNUadj,
  kTtr,
  kNounVar,
  kVerbVar,
  kAdjVar,
  kFkre,
  kRtAverage,
};

inline constexpr std::size_t kNumFeatures = 14;

// Flesch reading ease of a single one-syllable word: the largest value the
// formula can produce for real text.
inline constexpr double kMaxFkre = 121.22;

enum class FeatureKind { kInteger, kRatio, kReal };

struct FeatureSpec {
  int id;
  std::string_view name;
  std::string_view description;
  FeatureKind kind;
  std::optional<double> lower;
  std::optional<double> upper;
};

const std::array<FeatureSpec, kNumFeatures>& feature_table();

constexpr std::size_t index_of(Feature f) { return static_cast<std::size_t>(f) - 1; }
constexpr Feature feature_at(std::size_t index) { return static_cast<Feature>(index + 1); }

const FeatureSpec& spec_of(Feature f);
std::string_view name_of(Feature f);
std::optional<Feature> feature_by_name(std::string_view name);

inline bool is_integer(Feature f) { return spec_of(f).kind == FeatureKind::kInteger; }

class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(const std::array<double, kNumFeatures>& values) : values_(values) {}

  double& operator[](Feature f) { return values_[index_of(f)]; }
  double operator[](Feature f) const { return values_[index_of(f)]; }

  std::span<const double, kNumFeatures> values() const { return values_; }
  const std::array<double, kNumFeatures>& array() const { return values_; }

  // Throws kMissingFeature naming the first absent feature. Unknown keys are
  // ignored.
  static FeatureVector from_map(const std::map<std::string, double, std::less<>>& named);

  bool operator==(const FeatureVector&) const = default;

 private:
  std::array<double, kNumFeatures> values_{};
};

}  // namespace lingctl
