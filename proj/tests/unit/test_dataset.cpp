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

#include <atomic>
#include <cmath>
#include <set>

#include "doctest.h"
#include "lingctl/dataset.hpp"
#include "lingctl/errors.hpp"
#include "lingctl/io.hpp"
#include "support.hpp"

using namespace lingctl;
using F = Feature;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an lingctl::Error");
  return ErrorKind::kInvalidArgument;
}

std::string error_message(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Tags the same word differently on every call, which breaks the counting
// invariants the lexicon tagger guarantees.
class FlakyTagger final : public PosTagger {
 public:
  Pos tag_word(std::string_view) const override {
    return calls_++ % 2 == 0 ? Pos::kNoun : Pos::kVerb;
  }

 private:
  mutable std::atomic<int> calls_{0};
};

std::vector<PreparedExample> prepared_instructions() {
  const auto examples = load_dataset(testing::data_path("instructions.jsonl"));
  return preprocess(examples, FeatureExtractor()).kept;
}

StandardizationStats corpus_stats() {
  const FeatureExtractor extractor;
  std::vector<FeatureVector> vs;
  for (const auto& t : testing::corpus_texts()) vs.push_back(extractor.extract(t));
  return fit_stats(vs, "corpus");
}

}  // namespace

TEST_CASE("parse_dataset and load_dataset") {
  const std::string three =
      "{\"instruction\": \"a\", \"output\": \"x\"}\n"
      "{\"instruction\": \"b\", \"input\": \"ctx\", \"output\": \"y\"}\n"
      "\n"
      "{\"id\": \"named\", \"instruction\": \"c\", \"output\": \"z\"}\n";
  const auto ex = parse_dataset(three, DatasetFormat::kJsonl);
  REQUIRE(ex.size() == 3);
  CHECK(ex[0].id == "0");
  CHECK(ex[1].id == "1");
  CHECK(ex[1].input == "ctx");
  CHECK(ex[2].id == "named");
  CHECK(ex[2].output == "z");

  CHECK(kind_of([] { parse_dataset("{\"instruction\": \"a\"}\n", DatasetFormat::kJsonl); }) ==
        ErrorKind::kMissingField);
  const std::string bad = "{\"instruction\": \"a\", \"output\": \"x\"}\n{not json\n";
  CHECK(kind_of([&] { parse_dataset(bad, DatasetFormat::kJsonl, "f.jsonl"); }) == ErrorKind::kParseError);
  CHECK(error_message([&] { parse_dataset(bad, DatasetFormat::kJsonl, "f.jsonl"); }).find("f.jsonl:2") !=
        std::string::npos);

  const auto arr = parse_dataset("[{\"instruction\": \"a\", \"output\": \"x\"}]", DatasetFormat::kJsonArray);
  REQUIRE(arr.size() == 1);
  CHECK(arr[0].instruction == "a");

  // Alpaca fields map verbatim.
  const auto rows = read_jsonl(testing::data_path("instructions.jsonl"));
  const auto loaded = load_dataset(testing::data_path("instructions.jsonl"));
  REQUIRE(rows.size() == loaded.size());
  REQUIRE(loaded.size() == 100);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(loaded[i].id == rows[i]["id"].get<std::string>());
    CHECK(loaded[i].instruction == rows[i]["instruction"].get<std::string>());
    CHECK(loaded[i].input == rows[i]["input"].get<std::string>());
    CHECK(loaded[i].output == rows[i]["output"].get<std::string>());
  }

  CHECK(kind_of([] { load_dataset("/nonexistent/data.jsonl"); }) == ErrorKind::kIoError);
}

TEST_CASE("preprocess") {
  const auto dirty = load_dataset(testing::data_path("dirty.jsonl"));
  const auto result = preprocess(dirty, FeatureExtractor(), 4);
  REQUIRE(result.kept.size() == 2);
  CHECK(result.kept[0].example.id == "ok1");
  CHECK(result.kept[0].index == 0);
  CHECK(result.kept[1].example.id == "ok2");
  CHECK(result.kept[1].index == 3);
  CHECK(result.kept[0].features == extract_features("Hello there, friend."));
  REQUIRE(result.dropped.size() == 2);
  CHECK(result.dropped[0].id == "empty");
  CHECK(result.dropped[0].reason == "EmptyText");
  CHECK(result.dropped[1].id == "dots");
  CHECK(result.dropped[1].reason == "EmptyText");

  // A rule violation is reported by rule name.
  const FeatureExtractor flaky(std::make_shared<FlakyTagger>());
  const std::vector<DatasetExample> one{{"x", "i", "", "dog dog"}};
  const auto r = preprocess(one, flaky, 1);
  REQUIRE(r.dropped.size() == 1);
  CHECK(r.dropped[0].reason == "t_uword >= n_unoun + n_uverb + n_uadj");

  const auto all = load_dataset(testing::data_path("instructions.jsonl"));
  const auto a = preprocess(all, FeatureExtractor(), 1);
  const auto b = preprocess(all, FeatureExtractor(), 8);
  REQUIRE(a.kept.size() == b.kept.size());
  for (std::size_t i = 0; i < a.kept.size(); ++i) CHECK(a.kept[i].features == b.kept[i].features);
  for (const auto& k : a.kept) CHECK(is_valid(k.features));
}

TEST_CASE("render_prompt") {
  const ControlVector none;
  CHECK(render_prompt("Name a color.", "", none).text() ==
        "Below is an instruction that describes a task. Write a response that appropriately completes the "
        "request.\n\n### Instruction:\nName a color.\n\n### Response:\n");
  CHECK(render_prompt("Translate.", "bonjour", none).text() ==
        "Below is an instruction that describes a task, paired with an input that provides further context. "
        "Write a response that appropriately completes the request.\n\n### Instruction:\nTranslate.\n\n"
        "### Input:\nbonjour\n\n### Response:\n");

  const ControlVector words{{{F::kTWord, 5}}};
  const auto p = render_prompt("Describe a pet.", "", words);
  CHECK(p.user.find("### Input:\n[t_word: 5]\n\n### Response:\n") != std::string::npos);
  for (const auto& spec : feature_table()) {
    CHECK(p.system.find("- " + std::string(spec.name) + ": " + std::string(spec.description)) != std::string::npos);
  }

  const ControlVector mixed{{{F::kFkre, 100.2399}, {F::kTtr, 0.8}}};
  CHECK(render_tags(mixed) == "[ttr: 0.80] [fkre: 100.24]");
  const auto q = render_prompt("Go.", "some input", mixed);
  CHECK(q.user.find("### Input:\nsome input [ttr: 0.80] [fkre: 100.24]\n\n") != std::string::npos);

  CHECK(format_value(F::kTWord, 12) == "12");
  CHECK(format_value(F::kFkre, -0.001) == "0.00");
  CHECK(format_value(F::kFkre, -12.345) == "-12.35");
  CHECK(format_value(F::kRtAverage, 0.0208333) == "0.02");
}

TEST_CASE("parse_tags") {
  const auto tags = parse_tags("text [t_word: 5] [bogus: 3] [fkre: -12.50] [ttr:0.8] [adj_var: x]");
  REQUIRE(tags.size() == 3);
  CHECK(tags[0].name == "t_word");
  CHECK(tags[0].value == 5);
  CHECK(tags[1].name == "fkre");
  CHECK(tags[1].value == -12.5);
  CHECK(tags[2].name == "ttr");
  CHECK(tags[2].value == 0.8);
  const auto cv = parse_controls("[n_adj: 2] [t_word: 9]");
  REQUIRE(cv.size() == 2);
  CHECK(cv.entries[0] == std::pair<Feature, double>{F::kNAdj, 2});
}

TEST_CASE("annotate_training") {
  const auto prepared = prepared_instructions();
  REQUIRE(prepared.size() == 100);

  Rng rng = make_stream(1, 0);
  for (const auto& ex : prepared) {
    const auto a = annotate_training(ex, 1, rng);
    CHECK(a.subset.size() == 1);
    CHECK(parse_tags(a.prompt.user).size() == 1);
  }

  PreparedExample cat{{"cat", "Write.", "", "the cat saw the dog"}, extract_features("the cat saw the dog"), 0};
  const auto p = render_prompt(cat.example.instruction, cat.example.input,
                               project(cat.features, ControlSubset({F::kTWord})));
  CHECK(p.user.find("[t_word: 5]") != std::string::npos);

  const auto a1 = annotate_dataset(prepared, 5, 7, 1);
  const auto a2 = annotate_dataset(prepared, 5, 7, 8);
  const AnnotationMeta meta{7, 5, {}};
  REQUIRE(a1.size() == a2.size());
  for (std::size_t i = 0; i < a1.size(); ++i) {
    CHECK(to_json(a1[i], meta).dump() == to_json(a2[i], meta).dump());
    CHECK(a1[i].target == prepared[i].example.output);
    CHECK(a1[i].controls.subset() == a1[i].subset);
    CHECK(parse_tags(a1[i].prompt.user).size() == a1[i].subset.size());
    CHECK(a1[i].subset.size() >= 1);
    CHECK(a1[i].subset.size() <= 5);
  }
  const auto other = annotate_dataset(prepared, 5, 8, 1);
  bool differs = false;
  for (std::size_t i = 0; i < a1.size(); ++i) differs |= !(other[i].subset == a1[i].subset);
  CHECK(differs);

  const auto j = to_json(a1[0], AnnotationMeta{7, 5, "corpus"});
  CHECK(j["meta"]["seed"] == 7);
  CHECK(j["meta"]["m"] == 5);
  CHECK(j["meta"]["sigma"].is_null());
  CHECK(j["meta"]["template_version"] == std::string(kTemplateVersion));
  CHECK(j["meta"]["stats_source"] == "corpus");
  CHECK(j["target"] == prepared[0].example.output);
}

TEST_CASE("build_eval_set") {
  const auto prepared = prepared_instructions();
  const auto stats = corpus_stats();

  EvalOptions opts;
  const auto set = build_eval_set(prepared, stats, opts, 7, 4);
  REQUIRE(set.tasks.size() + set.skipped.size() == prepared.size());
  CHECK(set.skipped.empty());
  for (std::size_t t = 0; t < set.tasks.size(); ++t) {
    const auto& task = set.tasks[t];
    REQUIRE(task.controls.size() == 5);
    CHECK(task.sigma == 0.1);
    CHECK(task.subset.size() >= 1);
    CHECK(task.subset.size() <= 5);

    // Replaying the example's stream recovers the full vectors, which must
    // all be valid and project onto the stored targets.
    Rng rng = make_stream(7, prepared[t].index);
    const auto subset = sample_subset(opts.m, rng);
    REQUIRE(subset == task.subset);
    for (int k = 0; k < opts.k; ++k) {
      const auto full = sample_control_vector(prepared[t].features, opts.sigma, stats, rng);
      CHECK(is_valid(full));
      CHECK(project(full, subset) == task.controls[k]);
    }
  }

  EvalOptions zero = opts;
  zero.sigma = 0;
  for (const auto& task : build_eval_set(prepared, stats, zero, 3).tasks) {
    for (const auto& c : task.controls) CHECK(c == project(task.reference, task.subset));
  }

  EvalOptions fixed = opts;
  fixed.fixed_n = 9;
  for (const auto& task : build_eval_set(prepared, stats, fixed, 3).tasks) CHECK(task.subset.size() == 9);

  const auto again = build_eval_set(prepared, stats, opts, 7, 1);
  REQUIRE(again.tasks.size() == set.tasks.size());
  for (std::size_t i = 0; i < again.tasks.size(); ++i) {
    CHECK(to_json(again.tasks[i]).dump() == to_json(set.tasks[i]).dump());
    const auto back = eval_task_from_json(to_json(set.tasks[i]));
    CHECK(to_json(back).dump() == to_json(set.tasks[i]).dump());
  }

  EvalOptions bad = opts;
  bad.k = 0;
  CHECK(kind_of([&] { build_eval_set(prepared, stats, bad, 1); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("split") {
  auto [train, test] = split_indices(10, 8, 2, 3);
  CHECK(train.size() == 8);
  CHECK(test.size() == 2);
  std::set<std::size_t> all(train.begin(), train.end());
  all.insert(test.begin(), test.end());
  CHECK(all.size() == 10);
  CHECK(split_indices(10, 8, 2, 3) == split_indices(10, 8, 2, 3));
  CHECK(kind_of([] { split_indices(5, 8, 2, 1); }) == ErrorKind::kInsufficientData);

  std::vector<int> items{0, 1, 2, 3, 4, 5};
  auto [a, b] = split(items, 4, 2, 1);
  CHECK(a.size() == 4);
  CHECK(b.size() == 2);
}

TEST_CASE("io round trips") {
  const auto v = extract_features("Bright colors make the small room feel warmer! Do they?");
  const auto j = to_json(v);
  CHECK(j["t_word"].is_number_integer());
  CHECK(j["ttr"].is_number_float());
  CHECK(feature_vector_from_json(j) == v);
  Json missing = j;
  missing.erase("fkre");
  CHECK(kind_of([&] { feature_vector_from_json(missing); }) == ErrorKind::kMissingFeature);

  const auto stats = corpus_stats();
  const auto back = stats_from_json(to_json(stats));
  CHECK(back.count == stats.count);
  CHECK(back.source == stats.source);
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    CHECK(back.features[i].mean == stats.features[i].mean);
    CHECK(back.features[i].std == stats.features[i].std);
  }
  const auto sj = to_json(stats);
  CHECK(sj["features"][0]["name"] == "t_word");
  CHECK(sj["features"].size() == 14);

  const ControlVector cv{{{F::kTWord, 5}, {F::kFkre, 88.5}}};
  CHECK(control_vector_from_json(to_json(cv)) == cv);

  CHECK(kind_of([] { parse_jsonl("{}\n[1,\n"); }) == ErrorKind::kParseError);
  const auto tmp = std::filesystem::temp_directory_path() / "lingctl_io_test.jsonl";
  const std::vector<Json> rows{Json{{"a", 1}}, Json{{"b", "two"}}};
  write_jsonl(tmp, rows);
  CHECK(read_file(tmp) == "{\"a\":1}\n{\"b\":\"two\"}\n");
  CHECK(read_jsonl(tmp).size() == 2);
  std::filesystem::remove(tmp);
}
