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

// Tokenization, syllable counting, sentence counting and part-of-speech
// tagging for English text.

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lingctl {

enum class TokenKind { kWord, kPunctuation, kNumber, kSymbol };
enum class Pos { kNoun, kVerb, kAdjective, kOther };

std::string_view to_string(TokenKind kind);
std::string_view to_string(Pos pos);

struct Token {
  std::string surface;
  // Byte offset of the surface in the source text.
  std::size_t offset = 0;
  TokenKind kind = TokenKind::kSymbol;
  Pos pos = Pos::kOther;
  // Zero for punctuation and symbols, at least one otherwise.
  int syllables = 0;

  // Any token with an alphanumeric character is a word, numerals included.
  bool is_word() const { return kind == TokenKind::kWord || kind == TokenKind::kNumber; }
};

// Splits UTF-8 text into tokens. Whitespace is dropped; every other byte
// belongs to exactly one token, so the input can be rebuilt from surfaces
// and offsets. Apostrophes, hyphens and periods between alphanumerics stay
// inside the word ("don't", "well-known", "3.14", "e.g"); a trailing period
// is kept on known abbreviations ("Dr.", "e.g.").
std::vector<Token> tokenize(std::string_view text);

// Vowel groups (a, e, i, o, u, y) count one each. A final "e" that forms its
// own group is silent unless it is the only group. Never returns less than 1.
int count_syllables(std::string_view word);

// Number of sentences: segments delimited by '.', '!' or '?' tokens that
// contain at least one word. Unterminated trailing text is one sentence.
// Throws kZeroWords when there is no word token.
int split_sentences(std::span<const Token> tokens);

// ASCII lower-casing; non-ASCII bytes pass through unchanged.
std::string fold_case(std::string_view text);

// Assigns one of {noun, verb, adjective, other} to a word. Implementations
// must decide from the case-folded surface alone: two tokens that fold to the
// same string always get the same tag, which is what keeps the unique-count
// features consistent with each other.
class PosTagger {
 public:
  virtual ~PosTagger() = default;

  virtual Pos tag_word(std::string_view folded) const = 0;

  // Fills pos for every token; non-word tokens get kOther.
  void tag(std::span<Token> tokens) const;
};

// Closed-class and common open-class lexicon backed by suffix rules for
// unknown words. Unknown words without a telling suffix are nouns.
class LexiconTagger final : public PosTagger {
 public:
  LexiconTagger();

  Pos tag_word(std::string_view folded) const override;

  // Lexicon lookup only; no inflection or suffix rules.
  const Pos* lookup(std::string_view folded) const;

  static std::shared_ptr<const LexiconTagger> shared();

 private:
  Pos by_inflection(std::string_view word) const;

  std::unordered_map<std::string, Pos> lexicon_;
};

std::vector<Token> tag_pos(std::vector<Token> tokens, const PosTagger& tagger);
std::vector<Token> tag_pos(std::vector<Token> tokens);

}  // namespace lingctl
