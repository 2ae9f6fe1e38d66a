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

#include "lingctl/dataset.hpp"

#include <algorithm>
#include <numeric>

#include "lingctl/errors.hpp"
#include "lingctl/parallel.hpp"

namespace lingctl {
namespace {

std::string string_field(const Json& record, std::string_view key, bool required, const std::string& where) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    if (required) throw Error(ErrorKind::kMissingField, where + ": missing field '" + std::string(key) + "'");
    return {};
  }
  if (!it->is_string()) {
    throw Error(ErrorKind::kParseError, where + ": field '" + std::string(key) + "' must be a string");
  }
  return it->get<std::string>();
}

DatasetExample example_from_json(const Json& record, std::size_t position, const std::string& where) {
  if (!record.is_object()) throw Error(ErrorKind::kParseError, where + ": record is not a JSON object");
  DatasetExample e;
  if (auto it = record.find("id"); it != record.end() && !it->is_null()) {
    e.id = it->is_string() ? it->get<std::string>() : it->dump();
  } else {
    e.id = std::to_string(position);
  }
  e.instruction = string_field(record, "instruction", true, where);
  e.input = string_field(record, "input", false, where);
  e.output = string_field(record, "output", true, where);
  return e;
}

}  // namespace

std::vector<DatasetExample> parse_dataset(std::string_view text, DatasetFormat format, const std::string& origin) {
  std::vector<DatasetExample> out;
  if (format == DatasetFormat::kJsonArray) {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::kParseError, origin + ": " + e.what());
    }
    if (!doc.is_array()) throw Error(ErrorKind::kParseError, origin + ": expected a JSON array");
    for (std::size_t i = 0; i < doc.size(); ++i) {
      out.push_back(example_from_json(doc[i], i, origin + ": record " + std::to_string(i)));
    }
    return out;
  }
  // JSONL: keep line numbers for error messages.
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    Json record;
    try {
      record = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::kParseError, where + ": " + e.what());
    }
    out.push_back(example_from_json(record, out.size(), where));
  }
  return out;
}

std::vector<DatasetExample> load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  return parse_dataset(read_file(path), format, path.string());
}

std::vector<DatasetExample> load_dataset(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  const auto format = (first != std::string::npos && text[first] == '[') ? DatasetFormat::kJsonArray
                                                                          : DatasetFormat::kJsonl;
  return parse_dataset(text, format, path.string());
}

Json to_json(const DatasetExample& e) {
  return Json{{"id", e.id}, {"instruction", e.instruction}, {"input", e.input}, {"output", e.output}};
}

Json to_json(const DropRecord& d) { return Json{{"id", d.id}, {"reason", d.reason}}; }

PreprocessResult preprocess(std::span<const DatasetExample> examples, const FeatureExtractor& extractor,
                            int jobs) {
  struct Outcome {
    std::optional<FeatureVector> features;
    std::string reason;
  };
  std::vector<Outcome> outcomes(examples.size());
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    try {
      FeatureVector v = extractor.extract(examples[i].output);
      ValidityReport report = validate(v);
      if (report.valid()) {
        outcomes[i].features = v;
      } else {
        outcomes[i].reason = std::string(rule_name(report.violations.front()));
      }
    } catch (const Error& e) {
      outcomes[i].reason = std::string(to_string(e.kind()));
    }
  });

  PreprocessResult result;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (outcomes[i].features) {
      result.kept.push_back({examples[i], *outcomes[i].features, i});
    } else {
      result.dropped.push_back({examples[i].id, outcomes[i].reason});
    }
  }
  return result;
}

AnnotatedExample annotate_training(const PreparedExample& example, int m, Rng& rng) {
  AnnotatedExample a;
  a.example = example.example;
  a.subset = sample_subset(m, rng);
  a.controls = project(example.features, a.subset);
  a.prompt = render_prompt(example.example.instruction, example.example.input, a.controls);
  a.target = example.example.output;
  return a;
}

std::vector<AnnotatedExample> annotate_dataset(std::span<const PreparedExample> examples, int m,
                                               std::uint64_t seed, int jobs) {
  if (m < 1 || m > static_cast<int>(kNumFeatures)) throw Error(ErrorKind::kInvalidArgument, "m must be in 1..14");
  std::vector<AnnotatedExample> out(examples.size());
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    Rng rng = make_stream(seed, examples[i].index);
    out[i] = annotate_training(examples[i], m, rng);
  });
  return out;
}

Json to_json(const AnnotatedExample& a, const AnnotationMeta& meta) {
  Json j{{"id", a.example.id}, {"prompt", a.prompt.text()}, {"target", a.target}, {"controls", to_json(a.controls)}};
  Json m{{"seed", meta.seed}, {"sigma", nullptr}, {"m", meta.m}, {"template_version", std::string(kTemplateVersion)}};
  if (!meta.stats_source.empty()) m["stats_source"] = meta.stats_source;
  j["meta"] = std::move(m);
  return j;
}

Json to_json(const EvalTask& t) {
  Json subset = Json::array();
  for (Feature f : t.subset.features()) subset.push_back(std::string(name_of(f)));
  Json controls = Json::array();
  for (const auto& c : t.controls) controls.push_back(to_json(c));
  return Json{{"id", t.id},           {"instruction", t.instruction},   {"input", t.input},
              {"sigma", t.sigma},     {"subset", std::move(subset)},    {"reference", to_json(t.reference)},
              {"controls", std::move(controls)}};
}

EvalTask eval_task_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParseError, "eval task must be a JSON object");
  for (const char* key : {"id", "instruction", "subset", "reference", "controls"}) {
    if (!j.contains(key)) throw Error(ErrorKind::kMissingField, std::string("eval task missing '") + key + "'");
  }
  EvalTask t;
  t.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
  t.instruction = j["instruction"].get<std::string>();
  t.input = j.value("input", std::string());
  t.sigma = j.value("sigma", 0.0);
  std::vector<Feature> subset;
  for (const auto& name : j["subset"]) {
    auto f = feature_by_name(name.get<std::string>());
    if (!f) throw Error(ErrorKind::kParseError, "unknown feature in subset: " + name.get<std::string>());
    subset.push_back(*f);
  }
  t.subset = ControlSubset(std::move(subset));
  t.reference = feature_vector_from_json(j["reference"]);
  for (const auto& c : j["controls"]) t.controls.push_back(control_vector_from_json(c));
  return t;
}

std::vector<EvalTask> load_eval_tasks(const std::filesystem::path& path) {
  std::vector<EvalTask> tasks;
  for (const auto& row : read_jsonl(path)) tasks.push_back(eval_task_from_json(row));
  return tasks;
}

EvalSet build_eval_set(std::span<const PreparedExample> examples, const StandardizationStats& stats,
                       const EvalOptions& options, std::uint64_t seed, int jobs) {
  if (options.k < 1) throw Error(ErrorKind::kInvalidArgument, "K must be positive");
  if (!(options.sigma >= 0)) throw Error(ErrorKind::kInvalidArgument, "sigma must be non-negative");
  if (options.m < 1 || options.m > static_cast<int>(kNumFeatures)) {
    throw Error(ErrorKind::kInvalidArgument, "m must be in 1..14");
  }

  std::vector<std::optional<EvalTask>> built(examples.size());
  std::vector<std::string> failure(examples.size());
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    const PreparedExample& ex = examples[i];
    Rng rng = make_stream(seed, ex.index);
    EvalTask task;
    task.id = ex.example.id;
    task.instruction = ex.example.instruction;
    task.input = ex.example.input;
    task.reference = ex.features;
    task.sigma = options.sigma;
    task.subset = options.fixed_n ? sample_subset_of_size(*options.fixed_n, rng) : sample_subset(options.m, rng);
    try {
      for (int k = 0; k < options.k; ++k) {
        FeatureVector full = sample_control_vector(ex.features, options.sigma, stats, rng, options.max_attempts);
        task.controls.push_back(project(full, task.subset));
      }
      built[i] = std::move(task);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kSamplingExhausted && e.kind() != ErrorKind::kInvalidArgument) throw;
      failure[i] = std::string(to_string(e.kind()));
    }
  });

  EvalSet out;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (built[i]) {
      out.tasks.push_back(std::move(*built[i]));
    } else {
      out.skipped.push_back({examples[i].example.id, failure[i]});
    }
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t total,
                                                                            std::size_t train_n,
                                                                            std::size_t test_n,
                                                                            std::uint64_t seed) {
  if (train_n + test_n > total) {
    throw Error(ErrorKind::kInsufficientData, "requested " + std::to_string(train_n) + "/" + std::to_string(test_n) +
                                                  " split of " + std::to_string(total) + " examples");
  }
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_stream(seed, 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_n));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(train_n),
                                order.begin() + static_cast<std::ptrdiff_t>(train_n + test_n));
  return {std::move(train), std::move(test)};
}

}  // namespace lingctl
