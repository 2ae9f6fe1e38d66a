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

#include "lingctl/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "lingctl/errors.hpp"

namespace lingctl {
namespace {

Json feature_value(Feature f, double value) {
  if (is_integer(f) && std::isfinite(value) && value == std::round(value)) {
    return static_cast<std::int64_t>(value);
  }
  return value;
}

double number_at(const Json& j, std::string_view key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::kMissingField, "missing field '" + std::string(key) + "'");
  if (!it->is_number()) throw Error(ErrorKind::kParseError, "field '" + std::string(key) + "' is not a number");
  return it->get<double>();
}

}  // namespace

Json to_json(const FeatureVector& v) {
  Json j = Json::object();
  for (const auto& spec : feature_table()) {
    const auto f = static_cast<Feature>(spec.id);
    j[std::string(spec.name)] = feature_value(f, v[f]);
  }
  return j;
}

FeatureVector feature_vector_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParseError, "feature vector must be a JSON object");
  std::map<std::string, double, std::less<>> named;
  for (const auto& [key, value] : j.items()) {
    if (!feature_by_name(key)) continue;
    if (!value.is_number()) throw Error(ErrorKind::kParseError, "feature '" + key + "' is not a number");
    named[key] = value.get<double>();
  }
  return FeatureVector::from_map(named);
}

Json to_json(const ControlVector& c) {
  Json j = Json::object();
  for (const auto& [f, value] : c.entries) j[std::string(name_of(f))] = feature_value(f, value);
  return j;
}

ControlVector control_vector_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParseError, "control vector must be a JSON object");
  ControlVector c;
  for (const auto& [key, value] : j.items()) {
    auto f = feature_by_name(key);
    if (!f) throw Error(ErrorKind::kParseError, "unknown feature '" + key + "'");
    if (!value.is_number()) throw Error(ErrorKind::kParseError, "control '" + key + "' is not a number");
    c.entries.emplace_back(*f, value.get<double>());
  }
  std::stable_sort(c.entries.begin(), c.entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return c;
}

Json to_json(const StandardizationStats& s) {
  Json features = Json::array();
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    const auto& fs = s.features[i];
    features.push_back(Json{{"name", std::string(name_of(feature_at(i)))},
                            {"mean", fs.mean},
                            {"std", fs.std},
                            {"min", fs.min},
                            {"max", fs.max}});
  }
  return Json{{"features", std::move(features)}, {"count", s.count}, {"source", s.source}};
}

StandardizationStats stats_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("features") || !j["features"].is_array()) {
    throw Error(ErrorKind::kParseError, "stats file must contain a 'features' array");
  }
  StandardizationStats s;
  std::array<bool, kNumFeatures> seen{};
  for (const auto& entry : j["features"]) {
    if (!entry.contains("name") || !entry["name"].is_string()) {
      throw Error(ErrorKind::kMissingField, "stats entry without a name");
    }
    auto f = feature_by_name(entry["name"].get<std::string>());
    if (!f) throw Error(ErrorKind::kParseError, "unknown feature in stats: " + entry["name"].get<std::string>());
    FeatureStats fs{number_at(entry, "mean"), number_at(entry, "std"), number_at(entry, "min"),
                    number_at(entry, "max")};
    if (!(fs.std > 0)) {
      throw Error(ErrorKind::kDegenerateFeature, "non-positive std for " + std::string(name_of(*f)));
    }
    s.features[index_of(*f)] = fs;
    seen[index_of(*f)] = true;
  }
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (!seen[i]) {
      throw Error(ErrorKind::kMissingFeature, "stats missing feature '" + std::string(name_of(feature_at(i))) + "'");
    }
  }
  s.count = j.value("count", std::size_t{0});
  s.source = j.value("source", std::string());
  return s;
}

StandardizationStats load_stats(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParseError, path.string() + ": " + e.what());
  }
  return stats_from_json(j);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::kIoError, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<Json> parse_jsonl(std::string_view text, const std::string& origin) {
  std::vector<Json> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) {
      try {
        rows.push_back(Json::parse(line));
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::kParseError, origin + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    start = end + 1;
  }
  return rows;
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(read_file(path), path.string());
}

std::string dump_jsonl(std::span<const Json> rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

void write_jsonl(const std::filesystem::path& path, std::span<const Json> rows) {
  write_file(path, dump_jsonl(rows));
}

}  // namespace lingctl
