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

// Instruction datasets: loading, validity filtering, control-tag annotation
// for training and evaluation-set construction.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lingctl/controls.hpp"
#include "lingctl/extract.hpp"
#include "lingctl/io.hpp"
#include "lingctl/prompt.hpp"

namespace lingctl {

struct DatasetExample {
  std::string id;
  std::string instruction;
  std::string input;
  std::string output;

  bool operator==(const DatasetExample&) const = default;
};

enum class DatasetFormat { kJsonl, kJsonArray };

// Missing ids become the record's 0-based position. Throws kParseError (with
// the line number for JSONL) and kMissingField for records without
// "instruction" or "output".
std::vector<DatasetExample> parse_dataset(std::string_view text, DatasetFormat format,
                                          const std::string& origin = "<input>");
std::vector<DatasetExample> load_dataset(const std::filesystem::path& path, DatasetFormat format);
// Picks the format from the first non-blank character.
std::vector<DatasetExample> load_dataset(const std::filesystem::path& path);

Json to_json(const DatasetExample& e);

// An example that passed preprocessing, with the features of its output.
struct PreparedExample {
  DatasetExample example;
  FeatureVector features;
  // Position in the source dataset; seeds the example's random stream.
  std::size_t index = 0;
};

struct DropRecord {
  std::string id;
  std::string reason;
};

Json to_json(const DropRecord& d);

struct PreprocessResult {
  std::vector<PreparedExample> kept;
  std::vector<DropRecord> dropped;
};

// Extracts features of every output; drops examples whose output has no
// words ("EmptyText") or violates a validity rule (the rule name).
PreprocessResult preprocess(std::span<const DatasetExample> examples, const FeatureExtractor& extractor,
                            int jobs = 1);

struct AnnotatedExample {
  DatasetExample example;
  ControlSubset subset;
  ControlVector controls;
  Prompt prompt;
  std::string target;
};

inline constexpr int kDefaultMaxControls = 5;

AnnotatedExample annotate_training(const PreparedExample& example, int m, Rng& rng);

// Annotates each example with its own stream make_stream(seed, index).
std::vector<AnnotatedExample> annotate_dataset(std::span<const PreparedExample> examples, int m,
                                               std::uint64_t seed, int jobs = 1);

struct AnnotationMeta {
  std::uint64_t seed = 0;
  int m = kDefaultMaxControls;
  std::string stats_source;
};

// {"id","prompt","target","controls":{...},"meta":{seed, sigma, m, template_version}}
Json to_json(const AnnotatedExample& a, const AnnotationMeta& meta);

struct EvalTask {
  std::string id;
  std::string instruction;
  std::string input;
  ControlSubset subset;
  // K targets, each the projection of a fully valid sampled vector.
  std::vector<ControlVector> controls;
  // Features of the reference output.
  FeatureVector reference;
  double sigma = 0;
};

Json to_json(const EvalTask& t);
EvalTask eval_task_from_json(const Json& j);
std::vector<EvalTask> load_eval_tasks(const std::filesystem::path& path);

struct EvalOptions {
  int m = kDefaultMaxControls;
  int k = 5;
  double sigma = 0.1;
  // When set, every task uses exactly this many controls instead of
  // n ~ Uniform{1..m}.
  std::optional<int> fixed_n;
  int max_attempts = kDefaultMaxAttempts;
};

struct EvalSet {
  std::vector<EvalTask> tasks;
  // Examples skipped because sampling was exhausted.
  std::vector<DropRecord> skipped;
};

EvalSet build_eval_set(std::span<const PreparedExample> examples, const StandardizationStats& stats,
                       const EvalOptions& options, std::uint64_t seed, int jobs = 1);

// Disjoint, seed-determined uniform split. Throws kInsufficientData when
// train_n + test_n exceeds the number of examples.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t total,
                                                                            std::size_t train_n,
                                                                            std::size_t test_n,
                                                                            std::uint64_t seed);

template <typename T>
std::pair<std::vector<T>, std::vector<T>> split(std::vector<T> examples, std::size_t train_n,
                                                std::size_t test_n, std::uint64_t seed) {
  auto [train_idx, test_idx] = split_indices(examples.size(), train_n, test_n, seed);
  std::pair<std::vector<T>, std::vector<T>> out;
  out.first.reserve(train_idx.size());
  out.second.reserve(test_idx.size());
  for (auto i : train_idx) out.first.push_back(std::move(examples[i]));
  for (auto i : test_idx) out.second.push_back(std::move(examples[i]));
  return out;
}

}  // namespace lingctl
