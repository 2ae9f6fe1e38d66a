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

// Clients for model endpoints and the batch runner that drives evaluation.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lingctl/dataset.hpp"
#include "lingctl/errors.hpp"
#include "lingctl/io.hpp"
#include "lingctl/prompt.hpp"

namespace lingctl {

struct EndpointConfig {
  // "chat-completions" (HTTP), "mock-constructive" or "mock-canned".
  std::string kind = "chat-completions";
  std::string base_url;
  std::string model;
  // Name of the environment variable holding the bearer token. The token
  // itself is never stored in the config.
  std::string token_env;
  double timeout_s = 60;
  int max_retries = 3;
  int max_parallel = 4;
  double temperature = 0;
  int max_tokens = 1024;
  double backoff_initial_s = 1;
  double backoff_max_s = 30;
  // Response returned by "mock-canned".
  std::string canned_response;
};

EndpointConfig endpoint_config_from_json(const Json& j);
EndpointConfig load_endpoint_config(const std::filesystem::path& path);
Json to_json(const EndpointConfig& cfg);

// Thrown by endpoints; remembers how many attempts were spent.
class CompletionError : public Error {
 public:
  CompletionError(ErrorKind kind, const std::string& message, int attempts)
      : Error(kind, message), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

struct Completion {
  std::string text;
  int attempts = 1;
};

// Implementations must be safe to call from several threads at once.
class ModelEndpoint {
 public:
  virtual ~ModelEndpoint() = default;
  virtual Completion complete(const Prompt& prompt) = 0;
  // In-process fakes report zero latency so their ledgers are reproducible.
  virtual bool measures_latency() const { return true; }
};

// POSTs {model, messages: [system, user], temperature, max_tokens} to
// <base_url>/chat/completions. 429, 5xx and transport failures are retried
// with exponential backoff; 401/403 fail immediately with kAuthError.
class ChatCompletionsEndpoint final : public ModelEndpoint {
 public:
  explicit ChatCompletionsEndpoint(EndpointConfig cfg);
  Completion complete(const Prompt& prompt) override;

 private:
  EndpointConfig cfg_;
  std::string origin_;  // scheme://host:port
  std::string path_;    // path prefix + /chat/completions
  std::optional<std::string> token_;
};

class CannedEndpoint final : public ModelEndpoint {
 public:
  explicit CannedEndpoint(std::string response) : response_(std::move(response)) {}
  Completion complete(const Prompt&) override { return {response_, 1}; }
  bool measures_latency() const override { return false; }

 private:
  std::string response_;
};

// Reads the control tags from the prompt and answers with constructive_mock
// over the count-type controls; other controls are ignored.
class ConstructiveMockEndpoint final : public ModelEndpoint {
 public:
  Completion complete(const Prompt& prompt) override;
  bool measures_latency() const override { return false; }
};

std::unique_ptr<ModelEndpoint> make_endpoint(const EndpointConfig& cfg);

// One-off completion through a freshly built endpoint.
std::string complete(const Prompt& prompt, const EndpointConfig& cfg);

// Text whose extracted count features (t_word, n_noun, n_verb, n_adj,
// t_uword, n_unoun, n_uverb, n_uadj) equal every count control given;
// unconstrained counts are filled in consistently. Throws kUnconstructible
// when no text can satisfy the controls, and kInvalidArgument when a
// non-count control is present.
std::string constructive_mock(const ControlVector& controls);

struct CompletionRecord {
  std::string task_id;
  int k = 0;
  std::string prompt;
  std::optional<std::string> response;
  std::optional<std::string> error;
  double latency_ms = 0;
  int attempts = 0;

  bool ok() const { return response.has_value(); }
};

Json to_json(const CompletionRecord& r);
CompletionRecord completion_record_from_json(const Json& j);

// Reads a ledger; when a (task_id, k) key repeats the last line wins.
std::vector<CompletionRecord> load_ledger(const std::filesystem::path& path);

struct BatchOptions {
  int max_parallel = 1;
  // Append-only JSONL ledger. Keys that already have a response are not
  // requested again; failed keys are retried.
  std::filesystem::path ledger;
  // Rewrite the ledger in canonical order once the batch finishes.
  bool compact = true;
};

struct BatchSummary {
  std::size_t total = 0;
  std::size_t reused = 0;
  std::size_t requested = 0;
  std::size_t failed = 0;
};

// One record per (task, k), returned in (task order, k) order. Per-record
// failures are recorded and never abort the batch.
std::vector<CompletionRecord> run_batch(std::span<const EvalTask> tasks, ModelEndpoint& endpoint,
                                        const BatchOptions& options, BatchSummary* summary = nullptr);

}  // namespace lingctl
