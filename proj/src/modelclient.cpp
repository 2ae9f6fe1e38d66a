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

#include "lingctl/modelclient.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "httplib.h"
#include "lingctl/parallel.hpp"

namespace lingctl {
namespace {

using Clock = std::chrono::steady_clock;

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::kParseError, std::string("endpoint config field '") + key + "' has the wrong type");
  }
}

std::chrono::microseconds to_micros(double seconds) {
  return std::chrono::microseconds(static_cast<long long>(std::max(0.0, seconds) * 1e6));
}

}  // namespace

EndpointConfig endpoint_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParseError, "endpoint config must be a JSON object");
  if (j.contains("token") || j.contains("api_key")) {
    throw Error(ErrorKind::kInvalidArgument, "endpoint config must not contain a token; use token_env");
  }
  EndpointConfig cfg;
  cfg.kind = field_or(j, "kind", cfg.kind);
  cfg.base_url = field_or(j, "base_url", cfg.base_url);
  cfg.model = field_or(j, "model", cfg.model);
  cfg.token_env = field_or(j, "token_env", cfg.token_env);
  cfg.timeout_s = field_or(j, "timeout_s", cfg.timeout_s);
  cfg.max_retries = field_or(j, "max_retries", cfg.max_retries);
  cfg.max_parallel = field_or(j, "max_parallel", cfg.max_parallel);
  cfg.temperature = field_or(j, "temperature", cfg.temperature);
  cfg.max_tokens = field_or(j, "max_tokens", cfg.max_tokens);
  cfg.backoff_initial_s = field_or(j, "backoff_initial_s", cfg.backoff_initial_s);
  cfg.backoff_max_s = field_or(j, "backoff_max_s", cfg.backoff_max_s);
  cfg.canned_response = field_or(j, "canned_response", cfg.canned_response);
  if (cfg.max_parallel < 1) throw Error(ErrorKind::kInvalidArgument, "max_parallel must be at least 1");
  if (!(cfg.timeout_s > 0)) throw Error(ErrorKind::kInvalidArgument, "timeout_s must be positive");
  if (cfg.max_retries < 0) throw Error(ErrorKind::kInvalidArgument, "max_retries must be non-negative");
  return cfg;
}

EndpointConfig load_endpoint_config(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParseError, path.string() + ": " + e.what());
  }
  return endpoint_config_from_json(j);
}

Json to_json(const EndpointConfig& cfg) {
  return Json{{"kind", cfg.kind},
              {"base_url", cfg.base_url},
              {"model", cfg.model},
              {"token_env", cfg.token_env},
              {"timeout_s", cfg.timeout_s},
              {"max_retries", cfg.max_retries},
              {"max_parallel", cfg.max_parallel},
              {"temperature", cfg.temperature},
              {"max_tokens", cfg.max_tokens},
              {"backoff_initial_s", cfg.backoff_initial_s},
              {"backoff_max_s", cfg.backoff_max_s}};
}

ChatCompletionsEndpoint::ChatCompletionsEndpoint(EndpointConfig cfg) : cfg_(std::move(cfg)) {
  const auto scheme_end = cfg_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::kInvalidArgument, "base_url must start with http:// or https://");
  }
  const auto path_start = cfg_.base_url.find('/', scheme_end + 3);
  origin_ = cfg_.base_url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : cfg_.base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/chat/completions";
  if (!cfg_.token_env.empty()) {
    if (const char* token = std::getenv(cfg_.token_env.c_str())) token_ = token;
  }
}

Completion ChatCompletionsEndpoint::complete(const Prompt& prompt) {
  if (!cfg_.token_env.empty() && !token_) {
    throw CompletionError(ErrorKind::kAuthError, "environment variable " + cfg_.token_env + " is not set", 0);
  }
  Json body{{"model", cfg_.model},
            {"messages", Json::array({Json{{"role", "system"}, {"content", prompt.system}},
                                      Json{{"role", "user"}, {"content", prompt.user}}})},
            {"temperature", cfg_.temperature},
            {"max_tokens", cfg_.max_tokens}};
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (token_) headers.emplace("Authorization", "Bearer " + *token_);

  const int max_attempts = cfg_.max_retries + 1;
  ErrorKind last_kind = ErrorKind::kConnectionError;
  std::string last_message;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    if (attempt > 1) {
      const double delay =
          std::min(cfg_.backoff_max_s, cfg_.backoff_initial_s * std::pow(2.0, attempt - 2));
      std::this_thread::sleep_for(to_micros(delay));
    }
    httplib::Client client(origin_);
    const auto timeout = to_micros(cfg_.timeout_s);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      const auto err = res.error();
      last_kind = (err == httplib::Error::Read || err == httplib::Error::Write ||
                   err == httplib::Error::ConnectionTimeout)
                      ? ErrorKind::kTimeout
                      : ErrorKind::kConnectionError;
      last_message = "transport error: " + httplib::to_string(err);
      continue;
    }
    const int status = res->status;
    if (status == 401 || status == 403) {
      throw CompletionError(ErrorKind::kAuthError, "HTTP " + std::to_string(status), attempt);
    }
    if (status == 429) {
      last_kind = ErrorKind::kRateLimited;
      last_message = "HTTP 429";
      continue;
    }
    if (status >= 500) {
      last_kind = ErrorKind::kConnectionError;
      last_message = "HTTP " + std::to_string(status);
      continue;
    }
    if (status != 200) {
      throw CompletionError(ErrorKind::kInvalidArgument, "HTTP " + std::to_string(status) + ": " + res->body,
                            attempt);
    }
    try {
      const Json reply = Json::parse(res->body);
      const Json& content = reply.at("choices").at(0).at("message").at("content");
      if (!content.is_string()) throw std::runtime_error("content is not a string");
      return {content.get<std::string>(), attempt};
    } catch (const std::exception& e) {
      throw CompletionError(ErrorKind::kMalformedResponse, std::string("unexpected response body: ") + e.what(),
                            attempt);
    }
  }
  throw CompletionError(last_kind, last_message + " after " + std::to_string(max_attempts) + " attempts",
                        max_attempts);
}

std::unique_ptr<ModelEndpoint> make_endpoint(const EndpointConfig& cfg) {
  if (cfg.kind == "chat-completions") return std::make_unique<ChatCompletionsEndpoint>(cfg);
  if (cfg.kind == "mock-constructive") return std::make_unique<ConstructiveMockEndpoint>();
  if (cfg.kind == "mock-canned") return std::make_unique<CannedEndpoint>(cfg.canned_response);
  throw Error(ErrorKind::kInvalidArgument, "unknown endpoint kind '" + cfg.kind + "'");
}

std::string complete(const Prompt& prompt, const EndpointConfig& cfg) {
  return make_endpoint(cfg)->complete(prompt).text;
}

Json to_json(const CompletionRecord& r) {
  Json j{{"task_id", r.task_id}, {"k", r.k}, {"prompt", r.prompt}};
  if (r.response) {
    j["response"] = *r.response;
  } else {
    j["error"] = r.error.value_or("Unknown");
  }
  j["latency_ms"] = r.latency_ms;
  j["attempts"] = r.attempts;
  return j;
}

CompletionRecord completion_record_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("task_id") || !j.contains("k")) {
    throw Error(ErrorKind::kMissingField, "ledger record needs task_id and k");
  }
  CompletionRecord r;
  r.task_id = j["task_id"].is_string() ? j["task_id"].get<std::string>() : j["task_id"].dump();
  r.k = j["k"].get<int>();
  r.prompt = j.value("prompt", std::string());
  if (j.contains("response") && j["response"].is_string()) r.response = j["response"].get<std::string>();
  if (j.contains("error") && j["error"].is_string()) r.error = j["error"].get<std::string>();
  if (r.response.has_value() == r.error.has_value()) {
    throw Error(ErrorKind::kParseError, "ledger record must hold exactly one of response and error");
  }
  r.latency_ms = j.value("latency_ms", 0.0);
  r.attempts = j.value("attempts", 0);
  return r;
}

std::vector<CompletionRecord> load_ledger(const std::filesystem::path& path) {
  std::vector<CompletionRecord> out;
  std::map<std::pair<std::string, int>, std::size_t> slot;
  for (const auto& row : read_jsonl(path)) {
    CompletionRecord r = completion_record_from_json(row);
    auto key = std::make_pair(r.task_id, r.k);
    if (auto it = slot.find(key); it != slot.end()) {
      out[it->second] = std::move(r);
    } else {
      slot.emplace(std::move(key), out.size());
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<CompletionRecord> run_batch(std::span<const EvalTask> tasks, ModelEndpoint& endpoint,
                                        const BatchOptions& options, BatchSummary* summary) {
  struct Job {
    const EvalTask* task;
    int k;
  };
  std::vector<Job> jobs;
  for (const auto& task : tasks) {
    for (int k = 0; k < static_cast<int>(task.controls.size()); ++k) jobs.push_back({&task, k});
  }

  std::map<std::pair<std::string, int>, CompletionRecord> done;
  if (!options.ledger.empty() && std::filesystem::exists(options.ledger)) {
    for (auto& r : load_ledger(options.ledger)) {
      if (r.ok()) done.emplace(std::make_pair(r.task_id, r.k), std::move(r));
    }
  }

  std::vector<std::optional<CompletionRecord>> results(jobs.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto it = done.find({jobs[i].task->id, jobs[i].k});
    if (it != done.end()) {
      results[i] = it->second;
    } else {
      pending.push_back(i);
    }
  }

  std::ofstream ledger;
  if (!options.ledger.empty()) {
    if (options.ledger.has_parent_path()) std::filesystem::create_directories(options.ledger.parent_path());
    ledger.open(options.ledger, std::ios::binary | std::ios::app);
    if (!ledger) throw Error(ErrorKind::kIoError, "cannot open ledger " + options.ledger.string());
  }
  std::mutex writer;

  parallel_for(pending.size(), std::max(1, options.max_parallel), [&](std::size_t p) {
    const Job& job = jobs[pending[p]];
    const EvalTask& task = *job.task;
    const Prompt prompt = render_prompt(task.instruction, task.input, task.controls[static_cast<std::size_t>(job.k)]);
    CompletionRecord record;
    record.task_id = task.id;
    record.k = job.k;
    record.prompt = prompt.text();
    const auto start = Clock::now();
    try {
      Completion c = endpoint.complete(prompt);
      record.response = std::move(c.text);
      record.attempts = c.attempts;
    } catch (const CompletionError& e) {
      record.error = std::string(to_string(e.kind())) + ": " + e.what();
      record.attempts = e.attempts();
    } catch (const Error& e) {
      record.error = std::string(to_string(e.kind())) + ": " + e.what();
      record.attempts = 1;
    } catch (const std::exception& e) {
      record.error = std::string("Unknown: ") + e.what();
      record.attempts = 1;
    }
    if (endpoint.measures_latency()) {
      record.latency_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
    std::lock_guard lock(writer);
    if (ledger.is_open()) {
      ledger << to_json(record).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
      ledger.flush();
    }
    results[pending[p]] = std::move(record);
  });
  if (ledger.is_open()) ledger.close();

  std::vector<CompletionRecord> out;
  out.reserve(results.size());
  BatchSummary s;
  s.total = jobs.size();
  s.reused = jobs.size() - pending.size();
  s.requested = pending.size();
  for (auto& r : results) {
    if (!r->ok()) ++s.failed;
    out.push_back(std::move(*r));
  }
  if (summary) *summary = s;

  if (options.compact && !options.ledger.empty()) {
    std::vector<Json> rows;
    rows.reserve(out.size());
    for (const auto& r : out) rows.push_back(to_json(r));
    // Records for tasks outside this batch are kept after the batch's own.
    std::set<std::pair<std::string, int>> keys;
    for (const auto& job : jobs) keys.emplace(job.task->id, job.k);
    for (const auto& [key, r] : done) {
      if (!keys.contains(key)) rows.push_back(to_json(r));
    }
    write_jsonl(options.ledger, rows);
  }
  return out;
}

}  // namespace lingctl
