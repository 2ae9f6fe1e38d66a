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

// lingctl: command-line front end for feature extraction, control sampling,
// dataset annotation and controllability evaluation.
//
// Every command that writes files also writes <output>.manifest.json (or
// manifest.json inside an output directory) with the resolved options, the
// seed and content hashes of all inputs.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lingctl/controls.hpp"
#include "lingctl/dataset.hpp"
#include "lingctl/errors.hpp"
#include "lingctl/extract.hpp"
#include "lingctl/io.hpp"
#include "lingctl/modelclient.hpp"
#include "lingctl/parallel.hpp"
#include "lingctl/report.hpp"
#include "lingctl/version.hpp"

namespace fs = std::filesystem;
using namespace lingctl;

namespace {

// Config files are TOML/INI key-value files, or JSON objects whose nested
// objects name subcommands: {"seed": 7, "annotate": {"m": 5}}.
class ConfigFormat : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream rest(text);
      return CLI::ConfigTOML::from_config(rest);
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError("config", e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  static void flatten(const nlohmann::json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto sub = parents;
        sub.push_back(key);
        flatten(value, sub, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }
};

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Common {
  std::uint64_t seed = 0;
  int jobs = 0;
};

// Options of the invoked subcommand as given or defaulted, in declaration
// order, plus the shared seed.
Json resolved_options(const CLI::App& sub, const Common& common) {
  Json args;
  args["seed"] = common.seed;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt == sub.get_help_ptr() || opt->get_lnames().empty()) continue;
    const std::string& key = opt->get_lnames().front();
    if (opt->count() == 0) {
      args[key] = opt->get_default_str();
    } else if (opt->get_items_expected_max() > 1 || opt->get_expected_max() > 1) {
      args[key] = opt->results();
    } else {
      args[key] = opt->results().empty() ? std::string() : opt->results().back();
    }
  }
  return args;
}

void write_manifest(const fs::path& path, const std::string& command, const Json& args,
                    const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs,
                    const Json& endpoint = nullptr) {
  Json m;
  m["tool"] = "lingctl";
  m["version"] = kVersion;
  m["template_version"] = std::string(kTemplateVersion);
  m["command"] = command;
  m["seed"] = args.value("seed", std::uint64_t{0});
  m["options"] = args;
  m["config_hash"] = hex(fnv1a(args.dump()));
  if (!endpoint.is_null()) m["endpoint"] = endpoint;
  Json ins = Json::array();
  for (const auto& p : inputs) ins.push_back({{"path", p.string()}, {"fnv1a64", hex(fnv1a(read_file(p)))}});
  m["inputs"] = ins;
  Json outs = Json::array();
  for (const auto& p : outputs) {
    Json o{{"path", p.string()}};
    if (fs::is_regular_file(p)) o["fnv1a64"] = hex(fnv1a(read_file(p)));
    outs.push_back(o);
  }
  m["outputs"] = outs;
  write_file(path, m.dump(2) + "\n");
}

fs::path manifest_for(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

std::string record_id(const Json& j, std::size_t line) {
  if (j.contains("id")) return j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
  return std::to_string(line);
}

// {"id","features":{...}} lines, or bare feature maps.
std::vector<std::pair<std::string, FeatureVector>> read_feature_lines(const fs::path& path, bool skip_errors) {
  std::vector<std::pair<std::string, FeatureVector>> out;
  const auto rows = read_jsonl(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Json& row = rows[i];
    if (row.contains("error") && skip_errors) continue;
    const Json& feats = row.contains("features") ? row["features"] : row;
    out.emplace_back(record_id(row, i), feature_vector_from_json(feats));
  }
  return out;
}

void emit_error(const Error& e) {
  Json j{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linguistic feature extraction, control sampling and controllability evaluation", "lingctl"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<ConfigFormat>());
  app.set_config("--config", "", "Key-value (TOML/INI) or JSON config file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common common;
  app.add_option("--seed", common.seed, "Master random seed");
  app.add_option("--jobs", common.jobs, "Worker threads (0 = one per hardware thread)");

  // extract
  auto* extract = app.add_subcommand("extract", "Extract the 14 features of each text");
  fs::path ex_in, ex_out;
  std::string ex_field;
  extract->add_option("--in", ex_in, "JSONL with a text field per line")->required()->check(CLI::ExistingFile);
  extract->add_option("--out", ex_out, "Output JSONL of {id, features}")->required();
  extract->add_option("--field", ex_field, "Text field (default: text, else output)");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Check feature vectors against the validity rules");
  fs::path va_in, va_out;
  validate_cmd->add_option("--in", va_in, "JSONL of feature vectors")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--out", va_out, "Output JSONL (default: stdout)");

  // fit-stats
  auto* fit = app.add_subcommand("fit-stats", "Fit standardization statistics");
  fs::path fs_in, fs_out;
  std::string fs_source;
  fit->add_option("--in", fs_in, "JSONL of feature vectors")->required()->check(CLI::ExistingFile);
  fit->add_option("--out", fs_out, "Output stats JSON")->required();
  fit->add_option("--source", fs_source, "Source label stored in the stats (default: input path)");

  // annotate
  auto* annotate = app.add_subcommand("annotate", "Annotate a training dataset with control tags");
  fs::path an_in, an_out, an_stats, an_drops;
  int an_m = kDefaultMaxControls;
  annotate->add_option("--in", an_in, "Dataset (JSONL or JSON array)")->required()->check(CLI::ExistingFile);
  annotate->add_option("--out", an_out, "Annotated JSONL")->required();
  annotate->add_option("--stats", an_stats, "Stats file recorded in the metadata")->check(CLI::ExistingFile);
  annotate->add_option("--m", an_m, "Maximum number of controls per example")->check(CLI::Range(1, 14));
  annotate->add_option("--drops", an_drops, "Drop report (default: <out>.drops.jsonl)");

  // sample-controls
  auto* sample = app.add_subcommand("sample-controls", "Sample valid target feature vectors");
  fs::path sc_in, sc_out, sc_stats;
  double sc_sigma = 0.1;
  int sc_k = 5;
  int sc_max_attempts = kDefaultMaxAttempts;
  sample->add_option("--in", sc_in, "JSONL of reference feature vectors")->required()->check(CLI::ExistingFile);
  sample->add_option("--stats", sc_stats, "Stats file")->required()->check(CLI::ExistingFile);
  sample->add_option("--out", sc_out, "Output JSONL of {id, k, features}")->required();
  sample->add_option("--sigma", sc_sigma, "Perturbation scale")->check(CLI::NonNegativeNumber);
  sample->add_option("--k", sc_k, "Samples per reference")->check(CLI::PositiveNumber);
  sample->add_option("--max-attempts", sc_max_attempts, "Rejection sampling budget")->check(CLI::PositiveNumber);

  // build-eval
  auto* build_eval = app.add_subcommand("build-eval", "Build evaluation tasks with sampled targets");
  fs::path be_in, be_out, be_stats, be_drops;
  EvalOptions be_opts;
  int be_n = 0;
  build_eval->add_option("--in", be_in, "Test dataset")->required()->check(CLI::ExistingFile);
  build_eval->add_option("--stats", be_stats, "Stats fitted on the training split")->required()->check(
      CLI::ExistingFile);
  build_eval->add_option("--out", be_out, "Evaluation tasks JSONL")->required();
  build_eval->add_option("--m", be_opts.m, "Maximum number of controls")->check(CLI::Range(1, 14));
  build_eval->add_option("--k", be_opts.k, "Target vectors per example")->check(CLI::PositiveNumber);
  build_eval->add_option("--sigma", be_opts.sigma, "Perturbation scale")->check(CLI::NonNegativeNumber);
  build_eval->add_option("--n", be_n, "Use exactly n controls per task (0 = Uniform{1..m})")->check(CLI::Range(0, 14));
  build_eval->add_option("--max-attempts", be_opts.max_attempts, "Rejection sampling budget")->check(
      CLI::PositiveNumber);
  build_eval->add_option("--drops", be_drops, "Drop report (default: <out>.drops.jsonl)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Query a model endpoint for every task");
  fs::path ev_tasks, ev_endpoint, ev_out;
  evaluate->add_option("--tasks", ev_tasks, "Evaluation tasks JSONL")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--endpoint", ev_endpoint, "Endpoint config JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", ev_out, "Response ledger JSONL (resumed if present)")->required();

  // report
  auto* report_cmd = app.add_subcommand("report", "Score response ledgers");
  std::vector<std::string> rp_responses;
  std::vector<fs::path> rp_targets;
  fs::path rp_out;
  std::string rp_sweep = "none";
  report_cmd->add_option("--responses", rp_responses, "Ledger per baseline, optionally NAME=PATH")->required();
  report_cmd->add_option("--targets", rp_targets, "Tasks JSONL, one shared or one per ledger")
      ->required()
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--out", rp_out, "Output directory")->required();
  report_cmd->add_option("--sweep", rp_sweep, "Treat ledgers as sweep points")
      ->check(CLI::IsMember({"none", "n", "sigma"}));

  // split
  auto* split_cmd = app.add_subcommand("split", "Split a dataset into disjoint train and test sets");
  fs::path sp_in, sp_train, sp_test;
  std::size_t sp_train_n = 0, sp_test_n = 0;
  split_cmd->add_option("--in", sp_in, "Dataset (JSONL or JSON array)")->required()->check(CLI::ExistingFile);
  split_cmd->add_option("--train", sp_train_n, "Training examples")->required();
  split_cmd->add_option("--test", sp_test_n, "Test examples")->required();
  split_cmd->add_option("--train-out", sp_train, "Training JSONL")->required();
  split_cmd->add_option("--test-out", sp_test, "Test JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const Json args = resolved_options(*sub, common);
  const FeatureExtractor extractor;

  try {
    if (command == "extract") {
      const auto rows = read_jsonl(ex_in);
      std::vector<Json> out(rows.size());
      parallel_for(rows.size(), common.jobs, [&](std::size_t i) {
        const Json& row = rows[i];
        std::string field = ex_field;
        if (field.empty()) field = row.contains("text") ? "text" : "output";
        if (!row.contains(field) || !row[field].is_string()) {
          throw Error(ErrorKind::kMissingField, "line " + std::to_string(i + 1) + " has no string field '" +
                                                    field + "'");
        }
        Json rec{{"id", record_id(row, i)}};
        try {
          rec["features"] = to_json(extractor.extract(row[field].get<std::string>()));
        } catch (const Error& e) {
          rec["error"] = std::string(to_string(e.kind()));
        }
        out[i] = std::move(rec);
      });
      write_jsonl(ex_out, out);
      write_manifest(manifest_for(ex_out), command, args, {ex_in}, {ex_out});

    } else if (command == "validate") {
      std::vector<Json> out;
      std::size_t invalid = 0;
      for (const auto& [id, v] : read_feature_lines(va_in, true)) {
        const ValidityReport rep = validate(v);
        Json violations = Json::array();
        for (Rule r : rep.violations) violations.push_back(std::string(rule_name(r)));
        if (!rep.valid()) ++invalid;
        out.push_back({{"id", id}, {"valid", rep.valid()}, {"violations", violations}});
      }
      if (va_out.empty()) {
        std::cout << dump_jsonl(out);
      } else {
        write_jsonl(va_out, out);
        write_manifest(manifest_for(va_out), command, args, {va_in}, {va_out});
      }
      std::cerr << out.size() << " vectors, " << invalid << " invalid\n";

    } else if (command == "fit-stats") {
      std::vector<FeatureVector> vectors;
      for (auto& [id, v] : read_feature_lines(fs_in, true)) vectors.push_back(v);
      const auto stats = fit_stats(vectors, fs_source.empty() ? fs_in.string() : fs_source);
      write_file(fs_out, to_json(stats).dump(2) + "\n");
      write_manifest(manifest_for(fs_out), command, args, {fs_in}, {fs_out});

    } else if (command == "annotate") {
      const auto examples = load_dataset(an_in);
      const auto prepared = preprocess(examples, extractor, common.jobs);
      const auto annotated = annotate_dataset(prepared.kept, an_m, common.seed, common.jobs);
      AnnotationMeta meta{common.seed, an_m, {}};
      std::vector<fs::path> inputs{an_in};
      if (!an_stats.empty()) {
        meta.stats_source = load_stats(an_stats).source;
        inputs.push_back(an_stats);
      }
      std::vector<Json> rows;
      rows.reserve(annotated.size());
      for (const auto& a : annotated) rows.push_back(to_json(a, meta));
      std::vector<Json> drops;
      for (const auto& d : prepared.dropped) drops.push_back(to_json(d));
      const fs::path drops_path = an_drops.empty() ? fs::path(an_out.string() + ".drops.jsonl") : an_drops;
      write_jsonl(an_out, rows);
      write_jsonl(drops_path, drops);
      write_manifest(manifest_for(an_out), command, args, inputs, {an_out, drops_path});
      std::cerr << rows.size() << " annotated, " << drops.size() << " dropped\n";

    } else if (command == "sample-controls") {
      const auto stats = load_stats(sc_stats);
      const auto refs = read_feature_lines(sc_in, true);
      std::vector<std::vector<Json>> per(refs.size());
      parallel_for(refs.size(), common.jobs, [&](std::size_t i) {
        Rng rng = make_stream(common.seed, i);
        for (int k = 0; k < sc_k; ++k) {
          const auto v = sample_control_vector(refs[i].second, sc_sigma, stats, rng, sc_max_attempts);
          per[i].push_back({{"id", refs[i].first}, {"k", k}, {"features", to_json(v)}});
        }
      });
      std::vector<Json> rows;
      for (auto& p : per) rows.insert(rows.end(), p.begin(), p.end());
      write_jsonl(sc_out, rows);
      write_manifest(manifest_for(sc_out), command, args, {sc_in, sc_stats}, {sc_out});

    } else if (command == "build-eval") {
      const auto stats = load_stats(be_stats);
      if (be_n > 0) be_opts.fixed_n = be_n;
      const auto examples = load_dataset(be_in);
      const auto prepared = preprocess(examples, extractor, common.jobs);
      const auto eval_set = build_eval_set(prepared.kept, stats, be_opts, common.seed, common.jobs);
      std::vector<Json> rows;
      for (const auto& t : eval_set.tasks) rows.push_back(to_json(t));
      std::vector<Json> drops;
      for (const auto& d : prepared.dropped) drops.push_back(to_json(d));
      for (const auto& d : eval_set.skipped) drops.push_back(to_json(d));
      const fs::path drops_path = be_drops.empty() ? fs::path(be_out.string() + ".drops.jsonl") : be_drops;
      write_jsonl(be_out, rows);
      write_jsonl(drops_path, drops);
      write_manifest(manifest_for(be_out), command, args, {be_in, be_stats}, {be_out, drops_path});
      std::cerr << rows.size() << " tasks, " << drops.size() << " dropped\n";

    } else if (command == "evaluate") {
      const auto tasks = load_eval_tasks(ev_tasks);
      const auto cfg = load_endpoint_config(ev_endpoint);
      auto endpoint = make_endpoint(cfg);
      BatchOptions opts;
      opts.max_parallel = std::max(1, std::min(cfg.max_parallel, resolve_jobs(common.jobs)));
      opts.ledger = ev_out;
      BatchSummary summary;
      run_batch(tasks, *endpoint, opts, &summary);
      write_manifest(manifest_for(ev_out), command, args, {ev_tasks, ev_endpoint}, {ev_out}, to_json(cfg));
      std::cerr << summary.total << " records: " << summary.reused << " reused, " << summary.requested
                << " requested, " << summary.failed << " failed\n";

    } else if (command == "report") {
      if (rp_targets.size() != 1 && rp_targets.size() != rp_responses.size()) {
        throw Error(ErrorKind::kInvalidArgument, "--targets must be given once or once per --responses");
      }
      std::vector<BaselineRun> runs;
      std::vector<fs::path> inputs;
      for (std::size_t i = 0; i < rp_responses.size(); ++i) {
        const std::string& spec = rp_responses[i];
        const auto eq = spec.find('=');
        const fs::path ledger = eq == std::string::npos ? fs::path(spec) : fs::path(spec.substr(eq + 1));
        const fs::path& targets = rp_targets.size() == 1 ? rp_targets[0] : rp_targets[i];
        BaselineRun run;
        run.name = eq == std::string::npos ? ledger.stem().string() : spec.substr(0, eq);
        run.tasks = load_eval_tasks(targets);
        run.records = load_ledger(ledger);
        runs.push_back(std::move(run));
        inputs.push_back(ledger);
        if (rp_targets.size() != 1 || i == 0) inputs.push_back(targets);
      }
      if (rp_sweep == "none") {
        const Report r = build_report(runs, extractor, common.jobs);
        write_report(rp_out, r, runs);
        write_manifest(rp_out / "manifest.json", command, args, inputs,
                       {rp_out / "scores.csv", rp_out / "normalization.csv", rp_out / "errors.csv",
                        rp_out / "radar.json"});
      } else {
        const auto kind = rp_sweep == "n" ? SweepKind::kN : SweepKind::kSigma;
        const SweepReport s = sweep_report(kind, runs, extractor, common.jobs);
        write_sweep(rp_out, s);
        const std::string stem = kind == SweepKind::kN ? "n_sweep" : "sigma_sweep";
        write_manifest(rp_out / "manifest.json", command, args, inputs,
                       {rp_out / (stem + ".csv"), rp_out / (stem + ".json"), rp_out / "normalization.csv"});
      }

    } else if (command == "split") {
      auto [train, test] = split(load_dataset(sp_in), sp_train_n, sp_test_n, common.seed);
      std::vector<Json> train_rows, test_rows;
      for (const auto& e : train) train_rows.push_back(to_json(e));
      for (const auto& e : test) test_rows.push_back(to_json(e));
      write_jsonl(sp_train, train_rows);
      write_jsonl(sp_test, test_rows);
      write_manifest(manifest_for(sp_train), command, args, {sp_in}, {sp_train, sp_test});
    }
  } catch (const Error& e) {
    emit_error(e);
    return 1;
  } catch (const std::exception& e) {
    emit_error(Error(ErrorKind::kIoError, e.what()));
    return 1;
  }
  return 0;
}
