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

// JSON and JSONL serialization shared by the CLI and the library. Objects
// keep insertion order so files are stable byte for byte.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lingctl/controls.hpp"
#include "lingctl/features.hpp"

namespace lingctl {

using Json = nlohmann::ordered_json;

// {"t_word": 5, ..., "rt_average": 0.0208}; integer features as integers.
Json to_json(const FeatureVector& v);
// Throws kMissingFeature when a feature is absent, kParseError when a value
// is not a number.
FeatureVector feature_vector_from_json(const Json& j);

Json to_json(const ControlVector& c);
ControlVector control_vector_from_json(const Json& j);

// {"features": [{"name", "mean", "std", "min", "max"}], "count", "source"}
Json to_json(const StandardizationStats& s);
StandardizationStats stats_from_json(const Json& j);
StandardizationStats load_stats(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view content);

// One JSON value per non-blank line. Throws kParseError with the 1-based
// line number.
std::vector<Json> parse_jsonl(std::string_view text, const std::string& origin = "<input>");
std::vector<Json> read_jsonl(const std::filesystem::path& path);
std::string dump_jsonl(std::span<const Json> rows);
void write_jsonl(const std::filesystem::path& path, std::span<const Json> rows);

}  // namespace lingctl
