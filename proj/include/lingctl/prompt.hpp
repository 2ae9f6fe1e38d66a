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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lingctl/controls.hpp"

namespace lingctl {

// Bumped whenever the rendered wording changes; stored with annotated data.
inline constexpr std::string_view kTemplateVersion = "alpaca-controls-v1";

// A rendered prompt. `system` maps to the system role of chat APIs and `user`
// to the user turn; text() is the flat form used for fine-tuning.
struct Prompt {
  std::string system;
  std::string user;

  std::string text() const { return system + "\n\n" + user; }
};

// Integers without decimals, everything else with exactly two.
std::string format_value(Feature f, double value);

// "[name: value]" blocks joined by single spaces, in feature-id order.
std::string render_tags(const ControlVector& controls);

// Alpaca-style prompt. With controls, the system text lists every feature
// with its description and the tag sequence is appended to the input
// section. Without controls the result is the plain Alpaca prompt.
Prompt render_prompt(std::string_view instruction, std::string_view input, const ControlVector& controls);

struct ParsedTag {
  std::string name;
  double value = 0;
};

// Recovers every "[name: value]" block whose name is a known feature, in the
// order they appear. Spaces around the colon are optional.
std::vector<ParsedTag> parse_tags(std::string_view text);

// parse_tags restricted to known features, as a control vector.
ControlVector parse_controls(std::string_view text);

}  // namespace lingctl
