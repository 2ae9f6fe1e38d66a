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

#include "lingctl/features.hpp"

#include "lingctl/errors.hpp"

namespace lingctl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyText: return "EmptyText";
    case ErrorKind::kZeroWords: return "ZeroWords";
    case ErrorKind::kMissingFeature: return "MissingFeature";
    case ErrorKind::kDegenerateFeature: return "DegenerateFeature";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kSamplingExhausted: return "SamplingExhausted";
    case ErrorKind::kInsufficientData: return "InsufficientData";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kMissingField: return "MissingField";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kTimeout: return "Timeout";
    case ErrorKind::kAuthError: return "AuthError";
    case ErrorKind::kRateLimited: return "RateLimited";
    case ErrorKind::kMalformedResponse: return "MalformedResponse";
    case ErrorKind::kConnectionError: return "ConnectionError";
    case ErrorKind::kUnconstructible: return "Unconstructible";
    case ErrorKind::kExtractionFailed: return "ExtractionFailed";
    case ErrorKind::kDegenerateScale: return "DegenerateScale";
    case ErrorKind::kEmptyRow: return "EmptyRow";
    case ErrorKind::kIncompleteLedger: return "IncompleteLedger";
  }
  return "Unknown";
}

const std::array<FeatureSpec, kNumFeatures>& feature_table() {
  using K = FeatureKind;
  static const std::array<FeatureSpec, kNumFeatures> table = {{
      {1, "t_word", "number of words", K::kInteger, 0.0, std::nullopt},
      {2, "n_noun", "number of nouns", K::kInteger, 0.0, std::nullopt},
      {3, "n_verb", "number of verbs", K::kInteger, 0.0, std::nullopt},
      {4, "n_adj", "number of adjectives", K::kInteger, 0.0, std::nullopt},
      {5, "t_uword", "number of unique words", K::kInteger, 0.0, std::nullopt},
      {6, "n_unoun", "number of unique nouns", K::kInteger, 0.0, std::nullopt},
      {7, "n_uverb", "number of unique verbs", K::kInteger, 0.0, std::nullopt},
      {8, "n_uadj", "number of unique adjectives", K::kInteger, 0.0, std::nullopt},
      {9, "ttr", "type-token ratio", K::kRatio, 0.0, 1.0},
      {10, "noun_var", "noun variation", K::kRatio, 0.0, 1.0},
      {11, "verb_var", "verb variation", K::kRatio, 0.0, 1.0},
      {12, "adj_var", "adjective variation", K::kRatio, 0.0, 1.0},
      {13, "fkre", "Flesch-Kincaid reading ease", K::kReal, std::nullopt, kMaxFkre},
      {14, "rt_average", "average reading time", K::kReal, 0.0, std::nullopt},
  }};
  return table;
}

const FeatureSpec& spec_of(Feature f) { return feature_table()[index_of(f)]; }

std::string_view name_of(Feature f) { return spec_of(f).name; }

std::optional<Feature> feature_by_name(std::string_view name) {
  for (const auto& spec : feature_table()) {
    if (spec.name == name) return static_cast<Feature>(spec.id);
  }
  return std::nullopt;
}

FeatureVector FeatureVector::from_map(const std::map<std::string, double, std::less<>>& named) {
  FeatureVector v;
  for (const auto& spec : feature_table()) {
    auto it = named.find(spec.name);
    if (it == named.end()) {
      throw Error(ErrorKind::kMissingFeature, "missing feature '" + std::string(spec.name) + "'");
    }
    v.values_[static_cast<std::size_t>(spec.id - 1)] = it->second;
  }
  return v;
}

}  // namespace lingctl
