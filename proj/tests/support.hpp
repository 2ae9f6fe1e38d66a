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

// Shared fixtures and independent oracles for the test binaries. Nothing in
// here calls into the library's rule engine or formulas.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lingctl/io.hpp"

namespace testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(LINGCTL_TEST_DATA) / name;
}

inline std::vector<std::string> corpus_texts() {
  std::vector<std::string> out;
  for (const auto& row : lingctl::read_jsonl(data_path("corpus.jsonl"))) out.push_back(row["text"]);
  return out;
}

// Violated rules as 0-based positions in the published rule list, written
// out long-hand over a raw array laid out in feature-id order.
inline std::vector<int> brute_force_violations(const std::array<double, 14>& v) {
  const double t_word = v[0], n_noun = v[1], n_verb = v[2], n_adj = v[3];
  const double t_uword = v[4], n_unoun = v[5], n_uverb = v[6], n_uadj = v[7];
  const double fkre = v[12];
  const bool ok[15] = {
      t_word > 0,
      t_word >= n_noun + n_verb + n_adj,
      t_word >= t_uword,
      n_noun >= 0,
      n_noun >= n_unoun,
      n_verb >= 0,
      n_verb >= n_uverb,
      n_adj >= 0,
      n_adj >= n_uadj,
      t_uword > 0,
      t_uword >= n_unoun + n_uverb + n_uadj,
      n_unoun >= 0,
      n_uverb >= 0,
      n_uadj >= 0,
      fkre <= 121.22,
  };
  std::vector<int> out;
  for (int i = 0; i < 15; ++i) {
    if (!ok[i]) out.push_back(i);
  }
  return out;
}

// Reading ease as an exact rational in integer arithmetic:
// (206835*w*s - 1015*w*w - 84600*y*s) / (1000*w*s).
inline double fkre_oracle(std::int64_t w, std::int64_t s, std::int64_t y) {
  const std::int64_t num = 206835 * w * s - 1015 * w * w - 84600 * y * s;
  const std::int64_t den = 1000 * w * s;
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

}  // namespace testing
