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

#include "lingctl/prompt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace lingctl {
namespace {

constexpr std::string_view kPreambleWithInput =
    "Below is an instruction that describes a task, paired with an input that provides further "
    "context. Write a response that appropriately completes the request.";
constexpr std::string_view kPreambleNoInput =
    "Below is an instruction that describes a task. Write a response that appropriately completes "
    "the request.";
constexpr std::string_view kControlsIntro =
    "The input ends with linguistic controls written as [name: value]. The response must match "
    "every requested value. The controls are:";

const std::string& controls_system_prompt() {
  static const std::string text = [] {
    std::string s(kPreambleWithInput);
    s += ' ';
    s += kControlsIntro;
    for (const auto& spec : feature_table()) {
      s += "\n- ";
      s += spec.name;
      s += ": ";
      s += spec.description;
    }
    return s;
  }();
  return text;
}

}  // namespace

std::string format_value(Feature f, double value) {
  char buf[64];
  if (is_integer(f)) {
    std::snprintf(buf, sizeof buf, "%.0f", std::round(value) + 0.0);
  } else {
    std::snprintf(buf, sizeof buf, "%.2f", value);
    // Avoid "-0.00".
    if (std::string_view(buf) == "-0.00") return "0.00";
  }
  return buf;
}

std::string render_tags(const ControlVector& controls) {
  // Entries may arrive in any order; tags always follow feature ids.
  auto sorted = controls.entries;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [f, value] : sorted) {
    if (!out.empty()) out += ' ';
    out += '[';
    out += name_of(f);
    out += ": ";
    out += format_value(f, value);
    out += ']';
  }
  return out;
}

Prompt render_prompt(std::string_view instruction, std::string_view input, const ControlVector& controls) {
  Prompt p;
  std::string user = "### Instruction:\n";
  user += instruction;
  if (controls.empty()) {
    p.system = std::string(input.empty() ? kPreambleNoInput : kPreambleWithInput);
    if (!input.empty()) {
      user += "\n\n### Input:\n";
      user += input;
    }
  } else {
    p.system = controls_system_prompt();
    user += "\n\n### Input:\n";
    if (!input.empty()) {
      user += input;
      user += ' ';
    }
    user += render_tags(controls);
  }
  user += "\n\n### Response:\n";
  p.user = std::move(user);
  return p;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<ParsedTag> parse_tags(std::string_view text) {
  std::vector<ParsedTag> tags;
  std::size_t pos = 0;
  while ((pos = text.find('[', pos)) != std::string_view::npos) {
    const std::size_t close = text.find(']', pos);
    if (close == std::string_view::npos) break;
    std::string_view body = text.substr(pos + 1, close - pos - 1);
    const std::size_t colon = body.find(':');
    if (colon != std::string_view::npos) {
      std::string_view name = trim(body.substr(0, colon));
      std::string_view number = trim(body.substr(colon + 1));
      double value = 0;
      auto [end, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
      if (ec == std::errc() && end == number.data() + number.size() && feature_by_name(name)) {
        tags.push_back({std::string(name), value});
        pos = close + 1;
        continue;
      }
    }
    ++pos;
  }
  return tags;
}

ControlVector parse_controls(std::string_view text) {
  ControlVector out;
  for (const auto& tag : parse_tags(text)) {
    out.entries.emplace_back(*feature_by_name(tag.name), tag.value);
  }
  return out;
}

}  // namespace lingctl
