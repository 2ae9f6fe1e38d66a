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

#include <algorithm>
#include <array>

#include "lingctl/errors.hpp"
#include "lingctl/text.hpp"

namespace lingctl {
namespace {

enum class CharClass { kSpace, kAlpha, kDigit, kPunct, kSymbol };

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes
};

// Malformed sequences decode as a single byte so that every byte is covered.
CodePoint decode(std::string_view s, std::size_t i) {
  auto b = static_cast<unsigned char>(s[i]);
  if (b < 0x80) return {b, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b & 0xE0) == 0xC0) {
    len = 2;
    cp = b & 0x1F;
  } else if ((b & 0xF0) == 0xE0) {
    len = 3;
    cp = b & 0x0F;
  } else if ((b & 0xF8) == 0xF0) {
    len = 4;
    cp = b & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (i + len > s.size()) return {0xFFFD, 1};
  for (std::size_t k = 1; k < len; ++k) {
    auto c = static_cast<unsigned char>(s[i + k]);
    if ((c & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (c & 0x3F);
  }
  return {cp, len};
}

bool is_ascii_punct(char32_t c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '\'': case '"': case '(': case ')': case '[': case ']':
    case '{': case '}': case '-':
      return true;
    default:
      return false;
  }
}

CharClass classify(char32_t c) {
  if (c < 0x80) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return CharClass::kSpace;
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return CharClass::kAlpha;
    if (c >= '0' && c <= '9') return CharClass::kDigit;
    if (is_ascii_punct(c)) return CharClass::kPunct;
    return CharClass::kSymbol;
  }
  if (c == 0xA0 || (c >= 0x2000 && c <= 0x200B) || c == 0x3000 || c == 0xFEFF) return CharClass::kSpace;
  if (c == 0xFFFD) return CharClass::kSymbol;
  // Latin-1 punctuation and signs, except the letter-like ones.
  if (c >= 0xA1 && c <= 0xBF) {
    if (c == 0xAA || c == 0xB5 || c == 0xBA) return CharClass::kAlpha;
    if (c == 0xA1 || c == 0xAB || c == 0xBB || c == 0xBF) return CharClass::kPunct;
    return CharClass::kSymbol;
  }
  if (c == 0xD7 || c == 0xF7) return CharClass::kSymbol;
  if (c >= 0x2010 && c <= 0x205E) return CharClass::kPunct;
  if (c >= 0x3001 && c <= 0x303F) return CharClass::kPunct;
  if ((c >= 0x2190 && c <= 0x2BFF) || (c >= 0x1F000 && c <= 0x1FAFF)) return CharClass::kSymbol;
  return CharClass::kAlpha;
}

bool is_alnum(CharClass k) { return k == CharClass::kAlpha || k == CharClass::kDigit; }

bool is_terminator(char32_t c) { return c == '.' || c == '!' || c == '?' || c == 0x2026; }

// Characters that may sit between two alphanumerics inside one word.
bool is_joiner(char32_t c) { return c == '\'' || c == 0x2019 || c == '-' || c == '.'; }

constexpr std::array<std::string_view, 28> kAbbreviations = {
    "mr.",   "mrs.", "ms.",  "dr.",  "prof.", "sr.",  "jr.",   "st.",   "vs.",  "e.g.",
    "i.e.",  "cf.",  "inc.", "ltd.", "co.",   "corp.", "no.",  "approx.", "dept.", "est.",
    "fig.",  "jan.", "feb.", "aug.", "sept.", "oct.", "nov.",  "dec.",
};

bool is_abbreviation(std::string_view surface_with_dot) {
  std::string folded = fold_case(surface_with_dot);
  if (std::find(kAbbreviations.begin(), kAbbreviations.end(), folded) != kAbbreviations.end()) return true;
  // Dotted initialisms such as "U.S" or "a.m".
  if (folded.size() >= 3) {
    bool pattern = true;
    for (std::size_t i = 0; i + 1 < folded.size(); i += 2) {
      if (!(folded[i] >= 'a' && folded[i] <= 'z') || folded[i + 1] != '.') {
        pattern = false;
        break;
      }
    }
    return pattern && folded.size() % 2 == 0;
  }
  return false;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::kWord: return "word";
    case TokenKind::kPunctuation: return "punctuation";
    case TokenKind::kNumber: return "number";
    case TokenKind::kSymbol: return "symbol";
  }
  return "symbol";
}

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::kNoun: return "noun";
    case Pos::kVerb: return "verb";
    case Pos::kAdjective: return "adjective";
    case Pos::kOther: return "other";
  }
  return "other";
}

std::string fold_case(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    CodePoint cp = decode(text, i);
    CharClass cls = classify(cp.value);
    if (cls == CharClass::kSpace) {
      i += cp.length;
      continue;
    }
    const std::size_t start = i;
    Token tok;
    tok.offset = start;
    if (is_alnum(cls)) {
      bool has_alpha = cls == CharClass::kAlpha;
      CharClass prev = cls;
      i += cp.length;
      while (i < text.size()) {
        CodePoint next = decode(text, i);
        CharClass next_cls = classify(next.value);
        if (is_alnum(next_cls)) {
          has_alpha = has_alpha || next_cls == CharClass::kAlpha;
          prev = next_cls;
          i += next.length;
          continue;
        }
        const std::size_t after = i + next.length;
        if (after < text.size()) {
          CharClass after_cls = classify(decode(text, after).value);
          bool joins = is_joiner(next.value) && is_alnum(after_cls);
          // "1,000" keeps its comma; "red,green" does not.
          if (next.value == ',' && prev == CharClass::kDigit && after_cls == CharClass::kDigit) joins = true;
          if (joins) {
            i = after;
            continue;
          }
        }
        break;
      }
      if (i < text.size() && text[i] == '.' && has_alpha &&
          is_abbreviation(text.substr(start, i - start + 1))) {
        ++i;
      }
      tok.kind = has_alpha ? TokenKind::kWord : TokenKind::kNumber;
    } else if (cls == CharClass::kPunct) {
      // Runs of one mark ("...", "--") or of sentence terminators ("?!")
      // form a single token.
      const bool terminator = is_terminator(cp.value);
      i += cp.length;
      while (i < text.size()) {
        CodePoint next = decode(text, i);
        bool same_run = next.value == cp.value || (terminator && is_terminator(next.value));
        if (!same_run) break;
        i += next.length;
      }
      tok.kind = TokenKind::kPunctuation;
    } else {
      i += cp.length;
      tok.kind = TokenKind::kSymbol;
    }
    tok.surface = std::string(text.substr(start, i - start));
    if (tok.is_word()) tok.syllables = count_syllables(tok.surface);
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

int count_syllables(std::string_view word) {
  std::string w = fold_case(word);
  int groups = 0;
  bool in_group = false;
  for (char c : w) {
    bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  // Last ASCII letter, skipping trailing marks such as the abbreviation dot.
  std::size_t end = w.size();
  while (end > 0 && !(w[end - 1] >= 'a' && w[end - 1] <= 'z')) --end;
  if (groups > 1 && end >= 2 && w[end - 1] == 'e' && !is_vowel(w[end - 2])) --groups;
  return std::max(groups, 1);
}

int split_sentences(std::span<const Token> tokens) {
  int sentences = 0;
  bool any_word = false;
  bool segment_has_word = false;
  for (const Token& tok : tokens) {
    if (tok.is_word()) {
      segment_has_word = true;
      any_word = true;
      continue;
    }
    if (tok.kind != TokenKind::kPunctuation) continue;
    bool terminator = !tok.surface.empty();
    for (std::size_t i = 0; i < tok.surface.size();) {
      CodePoint cp = decode(tok.surface, i);
      terminator = terminator && is_terminator(cp.value);
      i += cp.length;
    }
    if (terminator && segment_has_word) {
      ++sentences;
      segment_has_word = false;
    }
  }
  if (!any_word) throw Error(ErrorKind::kZeroWords, "text contains no word tokens");
  if (segment_has_word) ++sentences;
  return sentences;
}

void PosTagger::tag(std::span<Token> tokens) const {
  for (Token& tok : tokens) {
    if (tok.kind == TokenKind::kWord) {
      tok.pos = tag_word(fold_case(tok.surface));
    } else {
      tok.pos = Pos::kOther;
    }
  }
}

std::vector<Token> tag_pos(std::vector<Token> tokens, const PosTagger& tagger) {
  tagger.tag(tokens);
  return tokens;
}

std::vector<Token> tag_pos(std::vector<Token> tokens) {
  return tag_pos(std::move(tokens), *LexiconTagger::shared());
}

}  // namespace lingctl
