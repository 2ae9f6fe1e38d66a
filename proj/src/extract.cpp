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

#include "lingctl/extract.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "lingctl/errors.hpp"

namespace lingctl {

double compute_fkre(int t_word, int t_sent, int t_syll) {
  if (t_word < 1 || t_sent < 1 || t_syll < 1) {
    throw Error(ErrorKind::kInvalidArgument, "compute_fkre requires positive counts");
  }
  // Over the common denominator 1000*w*s the value is one division of two
  // integers, so the result is correctly rounded and a one-word,
  // one-syllable sentence lands exactly on 121.22.
  const __int128 w = t_word, s = t_sent, y = t_syll;
  const __int128 num = 206835 * w * s - 1015 * w * w - 84600 * y * s;
  const __int128 den = 1000 * w * s;
  constexpr __int128 kExact = __int128{1} << 53;
  if (num < kExact && num > -kExact && den < kExact) {
    return static_cast<double>(static_cast<std::int64_t>(num)) / static_cast<double>(static_cast<std::int64_t>(den));
  }
  const double words = t_word;
  return 206.835 - 1.015 * (words / t_sent) - 84.6 * (t_syll / words);
}

FeatureExtractor::FeatureExtractor() : tagger_(LexiconTagger::shared()) {}

FeatureExtractor::FeatureExtractor(std::shared_ptr<const PosTagger> tagger) : tagger_(std::move(tagger)) {}

AnalyzedText FeatureExtractor::analyze(std::string_view text) const {
  AnalyzedText out;
  out.tokens = tokenize(text);
  tagger_->tag(out.tokens);
  for (const Token& tok : out.tokens) {
    if (!tok.is_word()) continue;
    ++out.word_count;
    out.syllable_count += tok.syllables;
  }
  if (out.word_count == 0) throw Error(ErrorKind::kEmptyText, "text contains no words");
  out.sentence_count = split_sentences(out.tokens);
  return out;
}

FeatureVector FeatureExtractor::extract(std::string_view text) const {
  const AnalyzedText analyzed = analyze(text);

  std::array<int, 4> pos_counts{};
  std::array<std::unordered_set<std::string>, 4> pos_unique;
  std::unordered_set<std::string> unique;
  for (const Token& tok : analyzed.tokens) {
    if (!tok.is_word()) continue;
    std::string folded = fold_case(tok.surface);
    auto p = static_cast<std::size_t>(tok.pos);
    ++pos_counts[p];
    pos_unique[p].insert(folded);
    unique.insert(std::move(folded));
  }

  auto ratio = [](double num, double den) { return den == 0 ? 0.0 : num / den; };
  const auto noun = static_cast<std::size_t>(Pos::kNoun);
  const auto verb = static_cast<std::size_t>(Pos::kVerb);
  const auto adj = static_cast<std::size_t>(Pos::kAdjective);

  FeatureVector v;
  v[Feature::kTWord] = analyzed.word_count;
  v[Feature::kNNoun] = pos_counts[noun];
  v[Feature::kNVerb] = pos_counts[verb];
  v[Feature::kNAdj] = pos_counts[adj];
  v[Feature::kTUword] = static_cast<double>(unique.size());
  v[Feature::kNUnoun] = static_cast<double>(pos_unique[noun].size());
  v[Feature::kNUverb] = static_cast<double>(pos_unique[verb].size());
  v[Feature::kNUadj] = static_cast<double>(pos_unique[adj].size());
  v[Feature::kTtr] = ratio(v[Feature::kTUword], v[Feature::kTWord]);
  v[Feature::kNounVar] = ratio(v[Feature::kNUnoun], v[Feature::kNNoun]);
  v[Feature::kVerbVar] = ratio(v[Feature::kNUverb], v[Feature::kNVerb]);
  v[Feature::kAdjVar] = ratio(v[Feature::kNUadj], v[Feature::kNAdj]);
  v[Feature::kFkre] = compute_fkre(analyzed.word_count, analyzed.sentence_count, analyzed.syllable_count);
  v[Feature::kRtAverage] = analyzed.word_count / 240.0;
  return v;
}

FeatureVector extract_features(std::string_view text) {
  static const FeatureExtractor extractor;
  return extractor.extract(text);
}

}  // namespace lingctl
