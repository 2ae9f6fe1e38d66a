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
#include <cmath>
#include <map>

#include "doctest.h"
#include "lingctl/dataset.hpp"
#include "lingctl/errors.hpp"
#include "lingctl/eval.hpp"
#include "lingctl/modelclient.hpp"
#include "lingctl/report.hpp"
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

// Answers every (task, k) with the example's reference output, whatever the
// controls ask for.
std::vector<CompletionRecord> reference_records(const std::vector<EvalTask>& tasks,
                                                const std::vector<PreparedExample>& prepared) {
  std::map<std::string, std::string> outputs;
  for (const auto& p : prepared) outputs[p.example.id] = p.example.output;
  std::vector<CompletionRecord> out;
  for (const auto& t : tasks) {
    for (std::size_t k = 0; k < t.controls.size(); ++k) {
      out.push_back({t.id, static_cast<int>(k), "", outputs.at(t.id), std::nullopt, 0, 1});
    }
  }
  return out;
}

std::vector<CompletionRecord> mock_records(const std::vector<EvalTask>& tasks) {
  ConstructiveMockEndpoint endpoint;
  return run_batch(tasks, endpoint, {4, {}, false});
}

const std::array<F, 8> kCounts = {F::kTWord, F::kNNoun, F::kNVerb, F::kNAdj,
                                  F::kTUword, F::kNUnoun, F::kNUverb, F::kNUadj};

}  // namespace

TEST_CASE("l1_error") {
  FeatureVector r;
  r[F::kTWord] = 10;
  auto e = l1_error(ControlVector{{{F::kTWord, 10}}}, r);
  REQUIRE(e.size() == 1);
  CHECK(e[0].error == 0);

  r[F::kTWord] = 13;
  e = l1_error(ControlVector{{{F::kTWord, 10}}}, r);
  CHECK(e[0].error == 3);

  r[F::kTtr] = 0.6;
  r[F::kFkre] = 75;
  e = l1_error(ControlVector{{{F::kTtr, 0.5}, {F::kFkre, 80}}}, r);
  REQUIRE(e.size() == 2);
  CHECK(e[0].feature == F::kTtr);
  CHECK(e[0].error == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(e[1].feature == F::kFkre);
  CHECK(e[1].error == 5);

  const FeatureExtractor extractor;
  CHECK(l1_error(ControlVector{{{F::kTWord, 3}}}, "The dog ran.", extractor)[0].error == 0);
  CHECK(kind_of([&] { l1_error(ControlVector{{{F::kTWord, 3}}}, "", extractor); }) ==
        ErrorKind::kExtractionFailed);
}

TEST_CASE("normalize_error") {
  const NormalizationParams p{2, 10};
  CHECK(normalize_error(2, p) == 0);
  CHECK(normalize_error(10, p) == 1);
  CHECK(normalize_error(6, p) == 0.5);
  CHECK(normalize_error(50, p) == 1);
  CHECK(normalize_error(0, p) == 0);
  CHECK(kind_of([] { normalize_error(1, NormalizationParams{3, 3}); }) == ErrorKind::kDegenerateScale);

  CHECK(report_normalize(3, NormalizationParams{3, 3}) == 0);
  CHECK(report_normalize(4, NormalizationParams{3, 3}) == 1);
  CHECK(report_normalize(6, p) == 0.5);
}

TEST_CASE("ErrorMatrix") {
  ErrorMatrix m;
  const auto a = m.add_baseline("a");
  CHECK(m.add_baseline("a") == a);
  const auto b = m.add_baseline("b");
  CHECK(b == 1);
  CHECK(kind_of([&] { m.add(F::kTWord, a, -1); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { m.normalization(F::kTWord); }) == ErrorKind::kEmptyRow);
  CHECK_FALSE(m.has_errors(F::kTWord));

  SUBCASE("two entries") {
    m.add(F::kTWord, a, 0);
    m.add(F::kTWord, a, 1);
    m.add(F::kTWord, b, 1);
    // pooled {0, 1, 1}: P95 at rank 1.9 is 1.
    const auto params = m.normalization(F::kTWord);
    CHECK(params.min == 0);
    CHECK(params.p95 == 1);
    CHECK(baseline_feature_score(m, F::kTWord, a) == 0.5);
    CHECK(baseline_feature_score(m, F::kTWord, b) == 1);
    CHECK(kind_of([&] { baseline_feature_score(m, F::kNNoun, a); }) == ErrorKind::kEmptyRow);
  }

  SUBCASE("single entry is degenerate") {
    m.add(F::kTWord, a, 4);
    CHECK(kind_of([&] { baseline_feature_score(m, F::kTWord, a); }) == ErrorKind::kDegenerateScale);
  }
}

TEST_CASE("three baselines against hand-computed normalization") {
  // pooled sorted {0, 1, 2, 4, 5, 10}; P95 rank 0.95 * 5 = 4.75,
  // so 5 + 0.75 * (10 - 5) = 8.75.
  const std::map<std::string, std::vector<double>> errors = {
      {"a", {0, 2, 4}}, {"b", {1, 5}}, {"c", {10}}};
  auto build = [&](double scale, double shift) {
    ErrorMatrix m;
    for (const auto& [name, es] : errors) {
      const auto i = m.add_baseline(name);
      for (double e : es) m.add(F::kNVerb, i, scale * e + shift);
    }
    return m;
  };
  const auto m = build(1, 0);
  const auto params = m.normalization(F::kNVerb);
  CHECK(params.min == 0);
  CHECK(params.p95 == doctest::Approx(8.75).epsilon(1e-12));
  const double sa = baseline_feature_score(m, F::kNVerb, 0);
  const double sb = baseline_feature_score(m, F::kNVerb, 1);
  const double sc = baseline_feature_score(m, F::kNVerb, 2);
  CHECK(sa == doctest::Approx(6.0 / 8.75 / 3).epsilon(1e-12));
  CHECK(sb == doctest::Approx(6.0 / 8.75 / 2).epsilon(1e-12));
  CHECK(sc == 1);
  CHECK(sa < sb);
  CHECK(sb < sc);

  const auto n = normalize_errors(m);
  CHECK(n.row(F::kNVerb, 0)[1] == doctest::Approx(2 / 8.75).epsilon(1e-12));
  CHECK_FALSE(n.has_errors(F::kTWord));

  // Scores are unchanged by a positive affine change of units.
  const auto m2 = build(3.5, 2);
  for (std::size_t b = 0; b < 3; ++b) {
    CHECK(baseline_feature_score(m2, F::kNVerb, b) ==
          doctest::Approx(baseline_feature_score(m, F::kNVerb, b)).epsilon(1e-12));
  }
}

TEST_CASE("reinforce_reward") {
  RewardStats stats;
  stats.range[index_of(F::kTWord)] = {0, 100};
  stats.range[index_of(F::kTtr)] = {0, 1};
  FeatureVector target, response;
  target[F::kTWord] = 10;
  response[F::kTWord] = 10;
  const ControlSubset words({F::kTWord});
  CHECK(reinforce_reward(target, response, words, stats) == 0);
  response[F::kTWord] = 15;
  CHECK(reinforce_reward(target, response, words, stats) == doctest::Approx(-0.05).epsilon(1e-12));

  response[F::kTWord] = 20;
  target[F::kTtr] = 0.5;
  response[F::kTtr] = 0.8;
  CHECK(reinforce_reward(target, response, ControlSubset({F::kTWord, F::kTtr}), stats) ==
        doctest::Approx(-0.2).epsilon(1e-12));

  CHECK(kind_of([&] { reinforce_reward(target, response, ControlSubset(), stats); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { reinforce_reward(target, response, ControlSubset({F::kFkre}), stats); }) ==
        ErrorKind::kDegenerateScale);

  // Shifting target and response together leaves the reward alone.
  Rng rng(5);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    FeatureVector t, r;
    t[F::kTWord] = u(rng);
    r[F::kTWord] = u(rng);
    const double shift = u(rng);
    FeatureVector t2 = t, r2 = r;
    t2[F::kTWord] += shift;
    r2[F::kTWord] += shift;
    const double expected = -std::abs(r[F::kTWord] - t[F::kTWord]) / 100;
    REQUIRE(reinforce_reward(t, r, words, stats) == doctest::Approx(expected).epsilon(1e-12));
    REQUIRE(reinforce_reward(t2, r2, words, stats) == doctest::Approx(expected).epsilon(1e-9));
    REQUIRE(reinforce_reward(t, r, words, stats) <= 0);
  }

  const auto from = RewardStats::from(corpus_stats());
  const auto cs = corpus_stats();
  CHECK(from.range[0].first == cs.features[0].min);
  CHECK(from.range[0].second == cs.features[0].max);

  const FeatureExtractor extractor;
  FeatureVector three;
  three[F::kTWord] = 3;
  CHECK(reinforce_reward(three, "The dog ran.", words, stats, extractor) == 0);
}

TEST_CASE("build_report") {
  const auto prepared = prepared_instructions();
  const auto stats = corpus_stats();
  EvalOptions opts;
  const auto set = build_eval_set(prepared, stats, opts, 7, 4);
  const FeatureExtractor extractor;

  std::vector<BaselineRun> runs = {
      {"mock", set.tasks, mock_records(set.tasks)},
      {"reference", set.tasks, reference_records(set.tasks, prepared)},
  };
  const auto r = build_report(runs, extractor, 4);
  REQUIRE(r.baselines.size() == 2);
  CHECK(r.records.size() == 2 * set.tasks.size() * 5);
  CHECK(r.failed[1] == 0);

  // The mock hits count targets exactly, the reference output does not.
  for (F f : kCounts) {
    if (!r.scores[0][index_of(f)]) continue;
    CHECK(*r.scores[0][index_of(f)] == 0);
    REQUIRE(r.scores[1][index_of(f)]);
    CHECK(*r.scores[1][index_of(f)] > 0);
  }
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    for (std::size_t b = 0; b < 2; ++b) {
      if (!r.scores[b][i]) continue;
      CHECK(*r.scores[b][i] >= 0);
      CHECK(*r.scores[b][i] <= 1);
    }
  }

  SUBCASE("deterministic across jobs") {
    const auto r1 = build_report(runs, extractor, 1);
    CHECK(scores_csv(r1) == scores_csv(r));
    CHECK(radar_json(r1).dump() == radar_json(r).dump());
    CHECK(errors_csv(r1, runs) == errors_csv(r, runs));
    CHECK(normalization_csv(r1) == normalization_csv(r));
  }

  SUBCASE("missing ledger keys") {
    auto broken = runs;
    broken[1].records.pop_back();
    CHECK(kind_of([&] { build_report(broken, extractor); }) == ErrorKind::kIncompleteLedger);
  }

  SUBCASE("failed records are counted, not scored") {
    auto partial = runs;
    partial[1].records[0].response.reset();
    partial[1].records[0].error = "Timeout: slow";
    partial[1].records[1].response = "";
    const auto pr = build_report(partial, extractor);
    CHECK(pr.failed[1] == 2);
  }

  SUBCASE("duplicate baseline names") {
    auto dup = runs;
    dup[1].name = "mock";
    CHECK(kind_of([&] { build_report(dup, extractor); }) == ErrorKind::kInvalidArgument);
  }

  SUBCASE("radar bundle shape") {
    const auto j = radar_json(r);
    CHECK(j["features"].size() == kNumFeatures);
    CHECK(j["baselines"].size() == 2);
    CHECK(j["baselines"][0]["name"] == "mock");
    CHECK(j["baselines"][0]["scores"].size() == kNumFeatures);
    CHECK(j["normalization"]["min"].size() == kNumFeatures);
  }
}

TEST_CASE("n sweep") {
  auto prepared = prepared_instructions();
  prepared.resize(20);
  const auto stats = corpus_stats();
  const FeatureExtractor extractor;
  std::vector<BaselineRun> runs;
  for (int n = 14; n >= 1; --n) {
    EvalOptions opts;
    opts.k = 2;
    opts.fixed_n = n;
    const auto set = build_eval_set(prepared, stats, opts, 11, 4);
    runs.push_back({"run" + std::to_string(n), set.tasks, reference_records(set.tasks, prepared)});
  }
  const auto s = sweep_report(SweepKind::kN, runs, extractor, 4);
  REQUIRE(s.n_rows.size() == 14);
  for (int n = 1; n <= 14; ++n) {
    const auto& row = s.n_rows[n - 1];
    CHECK(row.n == n);
    CHECK(row.examples == 20);
    CHECK(row.ci_low <= row.mean);
    CHECK(row.mean <= row.ci_high);
    CHECK(row.mean >= 0);
    CHECK(row.mean <= 1);
  }
  CHECK(s.report.baselines.front() == "n=1");
  CHECK(sweep_json(s)["rows"].size() == 14);
  CHECK(sweep_csv(s) == sweep_csv(sweep_report(SweepKind::kN, runs, extractor, 1)));

  auto missing = runs;
  missing.erase(missing.begin() + 3);
  CHECK(kind_of([&] { sweep_report(SweepKind::kN, missing, extractor); }) == ErrorKind::kIncompleteLedger);
}

TEST_CASE("sigma sweep") {
  const auto prepared = prepared_instructions();
  const auto stats = corpus_stats();
  const FeatureExtractor extractor;
  std::vector<BaselineRun> mock_runs, ref_runs;
  for (double sigma : {0.3, 0.1}) {
    EvalOptions opts;
    opts.sigma = sigma;
    const auto set = build_eval_set(prepared, stats, opts, 7, 4);
    mock_runs.push_back({"m", set.tasks, mock_records(set.tasks)});
    ref_runs.push_back({"r", set.tasks, reference_records(set.tasks, prepared)});
  }

  const auto mock = sweep_report(SweepKind::kSigma, mock_runs, extractor, 4);
  REQUIRE(mock.sigma_rows.size() == 2);
  CHECK(mock.sigma_rows[0].sigma == 0.1);
  CHECK(mock.sigma_rows[1].sigma == 0.3);
  for (const auto& row : mock.sigma_rows) {
    for (F f : kCounts) {
      if (row.scores[index_of(f)]) CHECK(*row.scores[index_of(f)] == 0);
    }
  }

  // A model that ignores its controls drifts further from wider targets.
  const auto ref = sweep_report(SweepKind::kSigma, ref_runs, extractor, 4);
  auto mean_score = [](const SigmaSweepRow& row) {
    double sum = 0;
    int count = 0;
    for (const auto& s : row.scores) {
      if (s) {
        sum += *s;
        ++count;
      }
    }
    return sum / count;
  };
  CHECK(mean_score(ref.sigma_rows[1]) > mean_score(ref.sigma_rows[0]));
  CHECK(sweep_json(ref)["kind"] == "sigma_sweep");
}
