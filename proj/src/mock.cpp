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

#include <array>
#include <cmath>
#include <numeric>
#include <optional>

#include "lingctl/modelclient.hpp"

namespace lingctl {
namespace {

// Pseudo-words built from these syllables never occur in the tagger's
// lexicon, so their suffix alone decides the tag.
constexpr std::array<std::string_view, 20> kSyllables = {
    "zor", "vex", "quil", "brim", "dax", "fen", "glo", "hup", "jin", "kev",
    "lom", "mib", "nup", "pev", "rax", "sul", "tov", "wix", "yab", "zun",
};

// Suffixes the tagger maps to noun, verb, adjective and other.
constexpr std::array<std::string_view, 4> kSuffixes = {"ness", "ize", "ous", "ly"};

std::string pseudo_word(std::size_t bucket, long index) {
  std::string stem;
  auto i = static_cast<std::size_t>(index);
  // At least two syllables; distinct indices give distinct stems.
  int digits = 0;
  do {
    stem += kSyllables[i % kSyllables.size()];
    i /= kSyllables.size();
    ++digits;
  } while (i > 0 || digits < 2);
  return stem + std::string(kSuffixes[bucket]);
}

struct Bucket {
  long total = 0;
  long unique = 0;
  bool total_fixed = false;
  bool unique_fixed = false;
};

[[noreturn]] void unconstructible(const std::string& why) {
  throw Error(ErrorKind::kUnconstructible, "cannot construct text: " + why);
}

}  // namespace

std::string constructive_mock(const ControlVector& controls) {
  using F = Feature;
  std::array<std::optional<long>, kNumFeatures> want;
  for (const auto& [f, value] : controls.entries) {
    if (!is_integer(f)) {
      throw Error(ErrorKind::kInvalidArgument, "constructive_mock only accepts count controls, got " +
                                                   std::string(name_of(f)));
    }
    if (!std::isfinite(value) || value != std::round(value) || value < 0) {
      unconstructible(std::string(name_of(f)) + " must be a non-negative integer");
    }
    want[index_of(f)] = static_cast<long>(value);
  }

  // noun, verb, adjective; "other" is whatever t_word/t_uword leave over.
  constexpr std::array<std::pair<F, F>, 3> kPos = {{
      {F::kNNoun, F::kNUnoun}, {F::kNVerb, F::kNUverb}, {F::kNAdj, F::kNUadj}}};
  std::array<Bucket, 3> pos;
  for (std::size_t b = 0; b < 3; ++b) {
    auto total = want[index_of(kPos[b].first)];
    auto unique = want[index_of(kPos[b].second)];
    Bucket& bk = pos[b];
    bk.total_fixed = total.has_value();
    bk.unique_fixed = unique.has_value();
    if (total && unique) {
      bk.total = *total;
      bk.unique = *unique;
      if (bk.unique > bk.total) unconstructible("unique count exceeds total for " + std::string(name_of(kPos[b].first)));
      if ((bk.total > 0) != (bk.unique > 0)) unconstructible("tokens without a distinct word in " + std::string(name_of(kPos[b].first)));
    } else if (total) {
      bk.total = *total;
      bk.unique = bk.total > 0 ? 1 : 0;
    } else if (unique) {
      bk.unique = *unique;
      bk.total = bk.unique;
    }
  }

  auto sum = [&](auto member) {
    return std::accumulate(pos.begin(), pos.end(), 0L, [&](long acc, const Bucket& b) { return acc + b.*member; });
  };
  const auto t_word = want[index_of(F::kTWord)];
  const auto t_uword = want[index_of(F::kTUword)];

  long other_total = 0;
  long other_unique = 0;
  if (t_word && t_uword) {
    if (*t_uword > *t_word) unconstructible("t_uword exceeds t_word");
    other_total = *t_word - sum(&Bucket::total);
    other_unique = *t_uword - sum(&Bucket::unique);
    // Too many distinct leftovers: make flexible POS uniques absorb them.
    for (auto& b : pos) {
      if (other_unique <= other_total || b.unique_fixed) continue;
      const long room = b.total - b.unique;
      const long take = std::min(room, other_unique - other_total);
      b.unique += take;
      other_unique -= take;
    }
    // Repeated leftovers without a distinct word: pile them onto a POS
    // bucket whose total is free.
    if (other_total > 0 && other_unique == 0) {
      for (auto& b : pos) {
        if (!b.total_fixed && b.unique > 0) {
          b.total += other_total;
          other_total = 0;
          break;
        }
      }
    }
  } else if (t_word) {
    other_total = *t_word - sum(&Bucket::total);
    other_unique = other_total > 0 ? 1 : 0;
  } else if (t_uword) {
    other_unique = *t_uword - sum(&Bucket::unique);
    other_total = other_unique;
  } else if (sum(&Bucket::total) == 0) {
    other_total = other_unique = 1;
  }

  if (other_total < 0) unconstructible("part-of-speech counts exceed t_word");
  if (other_unique < 0) unconstructible("unique part-of-speech counts exceed t_uword");
  if (other_unique > other_total) unconstructible("more distinct words than tokens left over");
  if ((other_total > 0) != (other_unique > 0)) unconstructible("repeated words without a distinct word");
  if (sum(&Bucket::total) + other_total == 0) unconstructible("t_word must be positive");

  std::vector<std::string> words;
  auto emit = [&](std::size_t bucket, long total, long unique) {
    for (long i = 0; i < total; ++i) words.push_back(pseudo_word(bucket, i < unique ? i : 0));
  };
  for (std::size_t b = 0; b < 3; ++b) emit(b, pos[b].total, pos[b].unique);
  emit(3, other_total, other_unique);

  // Sentences of at most twelve words.
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) text += ' ';
    text += words[i];
    if ((i + 1) % 12 == 0 || i + 1 == words.size()) text += '.';
  }
  return text;
}

Completion ConstructiveMockEndpoint::complete(const Prompt& prompt) {
  ControlVector counts;
  for (const auto& [f, value] : parse_controls(prompt.user).entries) {
    if (is_integer(f)) counts.entries.emplace_back(f, value);
  }
  return {constructive_mock(counts), 1};
}

}  // namespace lingctl
