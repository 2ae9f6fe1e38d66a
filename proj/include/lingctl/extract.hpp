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

#include <memory>
#include <string_view>
#include <vector>

#include "lingctl/features.hpp"
#include "lingctl/text.hpp"

namespace lingctl {

struct AnalyzedText {
  std::vector<Token> tokens;
  int sentence_count = 0;
  int syllable_count = 0;
  int word_count = 0;
};

// Flesch reading ease. All arguments must be at least 1.
double compute_fkre(int t_word, int t_sent, int t_syll);

// Immutable after construction; extract() is pure and may be called from any
// number of threads.
class FeatureExtractor {
 public:
  FeatureExtractor();
  explicit FeatureExtractor(std::shared_ptr<const PosTagger> tagger);

  // Tokenized, tagged and counted text. Throws kEmptyText without words.
  AnalyzedText analyze(std::string_view text) const;

  FeatureVector extract(std::string_view text) const;

  const PosTagger& tagger() const { return *tagger_; }

 private:
  std::shared_ptr<const PosTagger> tagger_;
};

// Uses the default lexicon tagger.
FeatureVector extract_features(std::string_view text);

}  // namespace lingctl
