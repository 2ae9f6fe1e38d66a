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

#include "lingctl/controls.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lingctl/errors.hpp"

namespace lingctl {

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::kWordPositive: return "t_word > 0";
    case Rule::kWordCoversPos: return "t_word >= n_noun + n_verb + n_adj";
    case Rule::kWordCoversUnique: return "t_word >= t_uword";
    case Rule::kNounNonNegative: return "n_noun >= 0";
    case Rule::kNounCoversUnique: return "n_noun >= n_unoun";
    case Rule::kVerbNonNegative: return "n_verb >= 0";
    case Rule::kVerbCoversUnique: return "n_verb >= n_uverb";
    case Rule::kAdjNonNegative: return "n_adj >= 0";
    case Rule::kAdjCoversUnique: return "n_adj >= n_uadj";
    case Rule::kUniquePositive: return "t_uword > 0";
    case Rule::kUniqueCoversPos: return "t_uword >= n_unoun + n_uverb + n_uadj";
    case Rule::kUniqueNounNonNegative: return "n_unoun >= 0";
    case Rule::kUniqueVerbNonNegative: return "n_uverb >= 0";
    case Rule::kUniqueAdjNonNegative: return "n_uadj >= 0";
    case Rule::kFkreBound: return "fkre <= 121.22";
  }
  return "unknown";
}

ValidityReport validate(const FeatureVector& v) {
  using F = Feature;
  const double word = v[F::kTWord], noun = v[F::kNNoun], verb = v[F::kNVerb], adj = v[F::kNAdj];
  const double uword = v[F::kTUword], unoun = v[F::kNUnoun], uverb = v[F::kNUverb], uadj = v[F::kNUadj];

  // Written as "holds" predicates so that NaN fails every rule it touches.
  const std::array<std::pair<Rule, bool>, kNumRules> checks = {{
      {Rule::kWordPositive, word > 0},
      {Rule::kWordCoversPos, word >= noun + verb + adj},
      {Rule::kWordCoversUnique, word >= uword},
      {Rule::kNounNonNegative, noun >= 0},
      {Rule::kNounCoversUnique, noun >= unoun},
      {Rule::kVerbNonNegative, verb >= 0},
      {Rule::kVerbCoversUnique, verb >= uverb},
      {Rule::kAdjNonNegative, adj >= 0},
      {Rule::kAdjCoversUnique, adj >= uadj},
      {Rule::kUniquePositive, uword > 0},
      {Rule::kUniqueCoversPos, uword >= unoun + uverb + uadj},
      {Rule::kUniqueNounNonNegative, unoun >= 0},
      {Rule::kUniqueVerbNonNegative, uverb >= 0},
      {Rule::kUniqueAdjNonNegative, uadj >= 0},
      {Rule::kFkreBound, v[F::kFkre] <= kMaxFkre},
  }};
  ValidityReport report;
  for (const auto& [rule, holds] : checks) {
    if (!holds) report.violations.push_back(rule);
  }
  return report;
}

StandardizationStats fit_stats(std::span<const FeatureVector> vectors, std::string source) {
  if (vectors.size() < 2) {
    throw Error(ErrorKind::kInsufficientData, "fit_stats needs at least two vectors, got " +
                                                  std::to_string(vectors.size()));
  }
  StandardizationStats stats;
  stats.count = vectors.size();
  stats.source = std::move(source);
  const auto n = static_cast<double>(vectors.size());
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    double sum = 0;
    double lo = vectors[0].array()[i];
    double hi = lo;
    for (const auto& v : vectors) {
      const double x = v.array()[i];
      sum += x;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double mean = sum / n;
    double ss = 0;
    for (const auto& v : vectors) {
      const double d = v.array()[i] - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / (n - 1));
    if (!(sd > 0) || lo == hi) {
      throw Error(ErrorKind::kDegenerateFeature,
                  "feature '" + std::string(name_of(feature_at(i))) + "' is constant across the corpus");
    }
    stats.features[i] = {mean, sd, lo, hi};
  }
  return stats;
}

Standardized standardize(const FeatureVector& v, const StandardizationStats& stats) {
  Standardized z{};
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    z[i] = (v.array()[i] - stats.features[i].mean) / stats.features[i].std;
  }
  return z;
}

FeatureVector destandardize(const Standardized& u, const StandardizationStats& stats) {
  FeatureVector v;
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    const Feature f = feature_at(i);
    double x = u[i] * stats.features[i].std + stats.features[i].mean;
    if (is_integer(f)) {
      x = std::round(x);
      if (auto lower = spec_of(f).lower) x = std::max(x, *lower);
      x += 0.0;  // normalizes -0
    }
    v[f] = x;
  }
  return v;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorKind::kInvalidArgument, "percentile of an empty set");
  if (p < 0 || p > 100) throw Error(ErrorKind::kInvalidArgument, "percentile outside [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

Standardized perturb(const Standardized& center, double sigma, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Standardized u = center;
  for (double& x : u) x += sigma * normal(rng);
  return u;
}

FeatureVector sample_control_vector(const FeatureVector& reference, double sigma,
                                    const StandardizationStats& stats, Rng& rng, int max_attempts) {
  if (!(sigma >= 0)) throw Error(ErrorKind::kInvalidArgument, "sigma must be non-negative");
  if (max_attempts < 1) throw Error(ErrorKind::kInvalidArgument, "max_attempts must be positive");
  if (!is_valid(reference)) throw Error(ErrorKind::kInvalidArgument, "reference vector is invalid");
  if (sigma == 0) return reference;

  const Standardized center = standardize(reference, stats);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    FeatureVector candidate = destandardize(perturb(center, sigma, rng), stats);
    if (is_valid(candidate)) return candidate;
  }
  throw Error(ErrorKind::kSamplingExhausted,
              "no valid control vector after " + std::to_string(max_attempts) + " attempts");
}

ControlSubset::ControlSubset(std::vector<Feature> features) : features_(std::move(features)) {
  std::sort(features_.begin(), features_.end());
  features_.erase(std::unique(features_.begin(), features_.end()), features_.end());
}

const ControlSubset& ControlSubset::all() {
  static const ControlSubset every = [] {
    std::vector<Feature> fs;
    for (std::size_t i = 0; i < kNumFeatures; ++i) fs.push_back(feature_at(i));
    return ControlSubset(std::move(fs));
  }();
  return every;
}

bool ControlSubset::contains(Feature f) const {
  return std::binary_search(features_.begin(), features_.end(), f);
}

ControlSubset sample_subset_of_size(int n, Rng& rng) {
  if (n < 1 || n > static_cast<int>(kNumFeatures)) {
    throw Error(ErrorKind::kInvalidArgument, "subset size must be in 1..14");
  }
  const auto& every = ControlSubset::all().features();
  std::vector<Feature> picked;
  // Selection sampling: every n-subset is equally likely, output stays sorted.
  std::sample(every.begin(), every.end(), std::back_inserter(picked), n, rng);
  return ControlSubset(std::move(picked));
}

ControlSubset sample_subset(int m, Rng& rng) {
  if (m < 1 || m > static_cast<int>(kNumFeatures)) {
    throw Error(ErrorKind::kInvalidArgument, "m must be in 1..14");
  }
  std::uniform_int_distribution<int> size(1, m);
  return sample_subset_of_size(size(rng), rng);
}

ControlSubset ControlVector::subset() const {
  std::vector<Feature> features;
  features.reserve(entries.size());
  for (const auto& [f, value] : entries) features.push_back(f);
  return ControlSubset(std::move(features));
}

ControlVector project(const FeatureVector& v, const ControlSubset& subset) {
  ControlVector out;
  out.entries.reserve(subset.size());
  for (Feature f : subset.features()) out.entries.emplace_back(f, v[f]);
  return out;
}

}  // namespace lingctl
