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
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "lingctl/errors.hpp"
#include "lingctl/extract.hpp"
#include "lingctl/modelclient.hpp"
#include "support.hpp"

using namespace lingctl;
using F = Feature;
namespace fs = std::filesystem;

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

std::string chat_reply(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

// A local chat-completions server whose behaviour is set per test.
class FakeServer {
 public:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&, int call)>;

  explicit FakeServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const int call = ++calls_;
      {
        std::lock_guard lock(mu_);
        last_body_ = req.body;
        last_auth_ = req.get_header_value("Authorization");
      }
      handler_(req, res, call);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  EndpointConfig config() const {
    EndpointConfig cfg;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    cfg.model = "test-model";
    cfg.timeout_s = 2;
    cfg.max_retries = 3;
    cfg.backoff_initial_s = 0.01;
    cfg.backoff_max_s = 0.05;
    return cfg;
  }

  int calls() const { return calls_; }
  std::string last_body() const {
    std::lock_guard lock(mu_);
    return last_body_;
  }
  std::string last_auth() const {
    std::lock_guard lock(mu_);
    return last_auth_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> calls_{0};
  mutable std::mutex mu_;
  std::string last_body_;
  std::string last_auth_;
};

Prompt test_prompt() { return render_prompt("Say hi.", "", ControlVector{{{F::kTWord, 2}}}); }

// Answers with the task's k and counts how often it was asked. Tasks whose
// id starts with "fail" raise.
class CountingEndpoint final : public ModelEndpoint {
 public:
  Completion complete(const Prompt& prompt) override {
    ++calls;
    if (prompt.user.find("fail") != std::string::npos) throw Error(ErrorKind::kConnectionError, "boom");
    return {"answer for " + prompt.user.substr(prompt.user.size() - 40), 1};
  }
  bool measures_latency() const override { return false; }
  std::atomic<int> calls{0};
};

std::vector<EvalTask> make_tasks(int n, int k) {
  std::vector<EvalTask> tasks;
  for (int i = 0; i < n; ++i) {
    EvalTask t;
    t.id = "t" + std::to_string(i);
    t.instruction = "Write about item " + std::to_string(i) + ".";
    t.subset = ControlSubset({F::kTWord});
    for (int j = 0; j < k; ++j) t.controls.push_back(ControlVector{{{F::kTWord, 5.0 + i + j}}});
    tasks.push_back(t);
  }
  return tasks;
}

fs::path temp_ledger(const std::string& name) {
  auto p = fs::temp_directory_path() / ("lingctl_" + name + ".jsonl");
  fs::remove(p);
  return p;
}

}  // namespace

TEST_CASE("endpoint config") {
  const auto cfg = endpoint_config_from_json(Json{{"base_url", "http://x"}, {"model", "m"}, {"max_parallel", 2}});
  CHECK(cfg.kind == "chat-completions");
  CHECK(cfg.temperature == 0);
  CHECK(cfg.max_parallel == 2);
  CHECK(endpoint_config_from_json(to_json(cfg)).base_url == "http://x");
  CHECK(kind_of([] { endpoint_config_from_json(Json{{"token", "sk-123"}}); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { endpoint_config_from_json(Json{{"max_parallel", 0}}); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { endpoint_config_from_json(Json{{"timeout_s", 0}}); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([] { endpoint_config_from_json(Json{{"max_retries", "x"}}); }) == ErrorKind::kParseError);
  CHECK(kind_of([] { make_endpoint(endpoint_config_from_json(Json{{"kind", "nope"}})); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("canned endpoint") {
  EndpointConfig cfg;
  cfg.kind = "mock-canned";
  cfg.canned_response = "fixed words here";
  CHECK(complete(test_prompt(), cfg) == "fixed words here");
}

TEST_CASE("chat completions over HTTP") {
  SUBCASE("request shape and bearer token") {
    FakeServer server([](const httplib::Request&, httplib::Response& res, int) {
      res.set_content(chat_reply("hello there"), "application/json");
    });
    ::setenv("LINGCTL_TEST_TOKEN", "secret-token", 1);
    auto cfg = server.config();
    cfg.token_env = "LINGCTL_TEST_TOKEN";
    ChatCompletionsEndpoint endpoint(cfg);
    const auto prompt = test_prompt();
    const auto c = endpoint.complete(prompt);
    CHECK(c.text == "hello there");
    CHECK(c.attempts == 1);
    CHECK(server.last_auth() == "Bearer secret-token");
    const auto body = Json::parse(server.last_body());
    CHECK(body["model"] == "test-model");
    CHECK(body["temperature"] == 0.0);
    REQUIRE(body["messages"].size() == 2);
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][0]["content"] == prompt.system);
    CHECK(body["messages"][1]["role"] == "user");
    CHECK(body["messages"][1]["content"] == prompt.user);

    // The token never reaches the ledger.
    const auto tasks = make_tasks(1, 2);
    const auto ledger = temp_ledger("token");
    run_batch(tasks, endpoint, {1, ledger, true});
    CHECK(read_file(ledger).find("secret-token") == std::string::npos);
    fs::remove(ledger);
    ::unsetenv("LINGCTL_TEST_TOKEN");
  }

  SUBCASE("missing token variable") {
    FakeServer server([](const httplib::Request&, httplib::Response& res, int) {
      res.set_content(chat_reply("x"), "application/json");
    });
    auto cfg = server.config();
    cfg.token_env = "LINGCTL_TEST_UNSET_TOKEN";
    ::unsetenv("LINGCTL_TEST_UNSET_TOKEN");
    ChatCompletionsEndpoint endpoint(cfg);
    CHECK(kind_of([&] { endpoint.complete(test_prompt()); }) == ErrorKind::kAuthError);
    CHECK(server.calls() == 0);
  }

  SUBCASE("429 twice then 200") {
    FakeServer server([](const httplib::Request&, httplib::Response& res, int call) {
      if (call <= 2) {
        res.status = 429;
        return;
      }
      res.set_content(chat_reply("finally"), "application/json");
    });
    ChatCompletionsEndpoint endpoint(server.config());
    const auto c = endpoint.complete(test_prompt());
    CHECK(c.text == "finally");
    CHECK(c.attempts == 3);
  }

  SUBCASE("rate limited on every attempt") {
    FakeServer server([](const httplib::Request&, httplib::Response& res, int) { res.status = 429; });
    auto cfg = server.config();
    cfg.max_retries = 2;
    ChatCompletionsEndpoint endpoint(cfg);
    try {
      endpoint.complete(test_prompt());
      FAIL("expected RateLimited");
    } catch (const CompletionError& e) {
      CHECK(e.kind() == ErrorKind::kRateLimited);
      CHECK(e.attempts() == 3);
    }
    CHECK(server.calls() == 3);
  }

  SUBCASE("auth failure is not retried") {
    FakeServer server([](const httplib::Request&, httplib::Response& res, int) { res.status = 401; });
    ChatCompletionsEndpoint endpoint(server.config());
    CHECK(kind_of([&] { endpoint.complete(test_prompt()); }) == ErrorKind::kAuthError);
    CHECK(server.calls() == 1);
  }

  SUBCASE("server errors are retried") {
    FakeServer server([](const httplib::Request&, httplib::Response& res, int call) {
      if (call == 1) {
        res.status = 503;
        return;
      }
      res.set_content(chat_reply("ok"), "application/json");
    });
    ChatCompletionsEndpoint endpoint(server.config());
    CHECK(endpoint.complete(test_prompt()).attempts == 2);
  }

  SUBCASE("malformed body") {
    FakeServer server([](const httplib::Request&, httplib::Response& res, int) {
      res.set_content("{\"choices\": []}", "application/json");
    });
    ChatCompletionsEndpoint endpoint(server.config());
    CHECK(kind_of([&] { endpoint.complete(test_prompt()); }) == ErrorKind::kMalformedResponse);
  }

  SUBCASE("timeout on every attempt; the batch continues") {
    FakeServer server([](const httplib::Request& req, httplib::Response& res, int) {
      if (req.body.find("slow") != std::string::npos) std::this_thread::sleep_for(std::chrono::milliseconds(700));
      res.set_content(chat_reply("fast answer"), "application/json");
    });
    auto cfg = server.config();
    cfg.timeout_s = 0.2;
    cfg.max_retries = 1;
    ChatCompletionsEndpoint endpoint(cfg);

    auto tasks = make_tasks(2, 1);
    tasks[0].instruction = "slow task";
    const auto records = run_batch(tasks, endpoint, {2, {}, false});
    REQUIRE(records.size() == 2);
    CHECK_FALSE(records[0].ok());
    CHECK(records[0].error->rfind("Timeout", 0) == 0);
    CHECK(records[0].attempts == 2);
    CHECK(records[1].ok());
    CHECK(*records[1].response == "fast answer");
  }

  SUBCASE("connection refused") {
    auto cfg = FakeServer([](const httplib::Request&, httplib::Response&, int) {}).config();
    cfg.max_retries = 1;
    ChatCompletionsEndpoint endpoint(cfg);
    CHECK(kind_of([&] { endpoint.complete(test_prompt()); }) == ErrorKind::kConnectionError);
  }
}

TEST_CASE("constructive mock") {
  const FeatureExtractor extractor;
  const auto seven = extractor.extract(constructive_mock(ControlVector{{{F::kTWord, 7}}}));
  CHECK(seven[F::kTWord] == 7);

  const auto nouns = extractor.extract(constructive_mock(ControlVector{{{F::kNNoun, 3}, {F::kNUnoun, 2}}}));
  CHECK(nouns[F::kNNoun] == 3);
  CHECK(nouns[F::kNUnoun] == 2);

  CHECK(kind_of([] { constructive_mock(ControlVector{{{F::kTWord, 3}, {F::kTUword, 5}}}); }) ==
        ErrorKind::kUnconstructible);
  CHECK(kind_of([] { constructive_mock(ControlVector{{{F::kTWord, 0}}}); }) == ErrorKind::kUnconstructible);
  CHECK(kind_of([] { constructive_mock(ControlVector{{{F::kNAdj, 2}, {F::kNUadj, 0}}}); }) ==
        ErrorKind::kUnconstructible);
  CHECK(kind_of([] { constructive_mock(ControlVector{{{F::kTWord, 2.5}}}); }) == ErrorKind::kUnconstructible);
  CHECK(kind_of([] { constructive_mock(ControlVector{{{F::kTtr, 0.5}}}); }) == ErrorKind::kInvalidArgument);
  CHECK(extractor.extract(constructive_mock(ControlVector{}))[F::kTWord] >= 1);

  // Random feasible count worlds: every subset of their counts is met.
  Rng rng(99);
  std::uniform_int_distribution<int> small(0, 6);
  std::bernoulli_distribution coin(0.5);
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::array<int, 4> uniq{}, total{};
    for (int b = 0; b < 4; ++b) {
      uniq[b] = small(rng);
      total[b] = uniq[b] == 0 ? 0 : uniq[b] + small(rng);
    }
    if (uniq[0] + uniq[1] + uniq[2] + uniq[3] == 0) continue;
    const std::array<std::pair<F, double>, 8> world = {{
        {F::kTWord, total[0] + total[1] + total[2] + total[3]},
        {F::kNNoun, total[0]},
        {F::kNVerb, total[1]},
        {F::kNAdj, total[2]},
        {F::kTUword, uniq[0] + uniq[1] + uniq[2] + uniq[3]},
        {F::kNUnoun, uniq[0]},
        {F::kNUverb, uniq[1]},
        {F::kNUadj, uniq[2]},
    }};
    ControlVector cv;
    for (const auto& e : world) {
      if (coin(rng)) cv.entries.push_back(e);
    }
    const auto got = extractor.extract(constructive_mock(cv));
    for (const auto& [f, v] : cv.entries) REQUIRE(got[f] == v);
    ++checked;
  }
  CHECK(checked > 2000);

  // The endpoint reads the tags back out of the prompt.
  ConstructiveMockEndpoint endpoint;
  const auto prompt = render_prompt("Write.", "", ControlVector{{{F::kTWord, 12}, {F::kTtr, 0.5}}});
  CHECK(extractor.extract(endpoint.complete(prompt).text)[F::kTWord] == 12);
}

TEST_CASE("run_batch") {
  const auto tasks = make_tasks(10, 5);

  SUBCASE("one record per (task, k) in canonical order") {
    CountingEndpoint endpoint;
    const auto records = run_batch(tasks, endpoint, {4, {}, false});
    REQUIRE(records.size() == 50);
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(records[i].task_id == tasks[i / 5].id);
      CHECK(records[i].k == static_cast<int>(i % 5));
      CHECK(records[i].ok());
    }
  }

  SUBCASE("resume issues only missing requests") {
    const auto ledger = temp_ledger("resume");
    CountingEndpoint first;
    const std::vector<EvalTask> six(tasks.begin(), tasks.begin() + 6);
    run_batch(six, first, {2, ledger, false});
    CHECK(first.calls == 30);
    CountingEndpoint second;
    BatchSummary summary;
    const auto records = run_batch(tasks, second, {3, ledger, true}, &summary);
    CHECK(second.calls == 20);
    CHECK(summary.reused == 30);
    CHECK(summary.requested == 20);
    CHECK(records.size() == 50);
    CHECK(load_ledger(ledger).size() == 50);
    fs::remove(ledger);
  }

  SUBCASE("failures are isolated and retried on resume") {
    auto with_fail = tasks;
    with_fail[3].instruction = "fail here";
    const auto ledger = temp_ledger("isolate");
    CountingEndpoint endpoint;
    BatchSummary summary;
    auto records = run_batch(with_fail, endpoint, {4, ledger, true}, &summary);
    CHECK(summary.failed == 5);
    int ok = 0;
    for (const auto& r : records) ok += r.ok();
    CHECK(ok == 45);

    auto one_fail = make_tasks(10, 5);
    one_fail[2].controls.resize(1);
    one_fail[2].instruction = "fail once";
    CountingEndpoint e2;
    const auto r2 = run_batch(one_fail, e2, {4, {}, false});
    int ok2 = 0;
    for (const auto& r : r2) ok2 += r.ok();
    CHECK(r2.size() == 46);
    CHECK(ok2 == 45);

    // The failed keys are requested again.
    CountingEndpoint again;
    run_batch(tasks, again, {4, ledger, true}, &summary);
    CHECK(again.calls == 5);
    CHECK(summary.failed == 0);
    fs::remove(ledger);
  }

  SUBCASE("parallelism does not change the records") {
    CountingEndpoint a, b;
    const auto la = temp_ledger("p1");
    const auto lb = temp_ledger("p16");
    run_batch(tasks, a, {1, la, true});
    run_batch(tasks, b, {16, lb, true});
    CHECK(read_file(la) == read_file(lb));
    fs::remove(la);
    fs::remove(lb);
  }

  SUBCASE("compaction keeps records of other tasks") {
    const auto ledger = temp_ledger("compact");
    CountingEndpoint e;
    run_batch(tasks, e, {2, ledger, true});
    const std::vector<EvalTask> two(tasks.begin(), tasks.begin() + 2);
    run_batch(two, e, {2, ledger, true});
    CHECK(load_ledger(ledger).size() == 50);
    fs::remove(ledger);
  }
}

TEST_CASE("ledger records") {
  CompletionRecord ok{"a", 0, "p", std::string("r"), std::nullopt, 1.5, 1};
  const auto j = to_json(ok);
  CHECK(j.contains("response"));
  CHECK_FALSE(j.contains("error"));
  CompletionRecord bad{"a", 1, "p", std::nullopt, std::string("Timeout: slow"), 0, 4};
  CHECK(to_json(bad).contains("error"));
  CHECK(completion_record_from_json(to_json(bad)).error == bad.error);

  Json both = j;
  both["error"] = "x";
  CHECK(kind_of([&] { completion_record_from_json(both); }) == ErrorKind::kParseError);

  const auto path = temp_ledger("lastwins");
  const std::vector<Json> rows{to_json(bad), to_json(CompletionRecord{"a", 1, "p", std::string("later"), {}, 0, 1})};
  write_jsonl(path, rows);
  const auto loaded = load_ledger(path);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].response == "later");
  fs::remove(path);
}
