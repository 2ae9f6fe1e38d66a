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

#include "lingctl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include "lingctl/errors.hpp"
#include "lingctl/parallel.hpp"

namespace lingctl {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0 ? 0.0 : v);
  return buf;
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

double report_normalize(double e, const NormalizationParams& params) {
  if (params.p95 > params.min) return normalize_error(e, params);
  return e > params.min ? 1.0 : 0.0;
}

Report build_report(std::span<const BaselineRun> runs, const FeatureExtractor& extractor, int jobs) {
  Report report;
  struct Job {
    std::size_t baseline;
    std::size_t task;
    int k;
    const ControlVector* target;
    const CompletionRecord* record;
  };
  std::vector<Job> work;

  for (std::size_t b = 0; b < runs.size(); ++b) {
    const BaselineRun& run = runs[b];
    if (report.raw.add_baseline(run.name) != b) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate baseline name '" + run.name + "'");
    }
    report.baselines.push_back(run.name);
    std::map<std::pair<std::string, int>, const CompletionRecord*> by_key;
    for (const auto& rec : run.records) by_key[{rec.task_id, rec.k}] = &rec;

    std::vector<std::string> missing;
    for (std::size_t t = 0; t < run.tasks.size(); ++t) {
      const EvalTask& task = run.tasks[t];
      for (std::size_t k = 0; k < task.controls.size(); ++k) {
        auto it = by_key.find({task.id, static_cast<int>(k)});
        if (it == by_key.end()) {
          missing.push_back("(" + task.id + ", " + std::to_string(k) + ")");
          continue;
        }
        work.push_back({b, t, static_cast<int>(k), &task.controls[k], it->second});
      }
    }
    if (!missing.empty()) {
      std::string msg = "ledger for '" + run.name + "' is missing " + std::to_string(missing.size()) + " record(s):";
      const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
      for (std::size_t i = 0; i < shown; ++i) msg += " " + missing[i];
      if (shown < missing.size()) msg += " ...";
      throw Error(ErrorKind::kIncompleteLedger, msg);
    }
  }

  report.records.resize(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) {
    const Job& job = work[i];
    ScoredRecord& out = report.records[i];
    out.baseline = job.baseline;
    out.task = job.task;
    out.k = job.k;
    if (!job.record->ok()) {
      out.failed = true;
      return;
    }
    try {
      out.errors = l1_error(*job.target, *job.record->response, extractor);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kExtractionFailed) throw;
      out.failed = true;
    }
  });

  report.failed.assign(runs.size(), 0);
  for (const auto& rec : report.records) {
    if (rec.failed) {
      ++report.failed[rec.baseline];
      continue;
    }
    for (const auto& e : rec.errors) report.raw.add(e.feature, rec.baseline, e.error);
  }

  report.scores.assign(runs.size(), {});
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    const Feature f = feature_at(i);
    if (!report.raw.has_errors(f)) continue;
    const NormalizationParams params = report.raw.normalization(f);
    report.normalization[i] = params;
    for (std::size_t b = 0; b < runs.size(); ++b) {
      const auto& row = report.raw.row(f, b);
      if (row.empty()) continue;
      double sum = 0;
      for (double e : row) sum += report_normalize(e, params);
      report.scores[b][i] = sum / static_cast<double>(row.size());
    }
  }
  return report;
}

std::string scores_csv(const Report& r) {
  std::string out = "baseline,feature,score,errors\n";
  for (std::size_t b = 0; b < r.baselines.size(); ++b) {
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      const Feature f = feature_at(i);
      out += r.baselines[b] + "," + std::string(name_of(f)) + ",";
      out += r.scores[b][i] ? num(*r.scores[b][i]) : "";
      out += "," + std::to_string(r.raw.row(f, b).size()) + "\n";
    }
  }
  return out;
}

std::string normalization_csv(const Report& r) {
  std::string out = "feature,min,p95\n";
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    out += std::string(name_of(feature_at(i))) + ",";
    if (const auto& p = r.normalization[i]) out += num(p->min) + "," + num(p->p95);
    else out += ",";
    out += "\n";
  }
  return out;
}

std::string errors_csv(const Report& r, std::span<const BaselineRun> runs) {
  std::string out = "baseline,task_id,k,feature,error\n";
  for (const auto& rec : r.records) {
    const std::string prefix =
        r.baselines[rec.baseline] + "," + runs[rec.baseline].tasks[rec.task].id + "," + std::to_string(rec.k) + ",";
    for (const auto& e : rec.errors) out += prefix + std::string(name_of(e.feature)) + "," + num(e.error) + "\n";
  }
  return out;
}

Json radar_json(const Report& r) {
  Json j;
  Json names = Json::array();
  for (std::size_t i = 0; i < kNumFeatures; ++i) names.push_back(std::string(name_of(feature_at(i))));
  j["features"] = names;
  Json baselines = Json::array();
  for (std::size_t b = 0; b < r.baselines.size(); ++b) {
    Json scores = Json::array();
    for (const auto& s : r.scores[b]) scores.push_back(opt_json(s));
    baselines.push_back({{"name", r.baselines[b]}, {"scores", scores}, {"failed", r.failed[b]}});
  }
  j["baselines"] = baselines;
  Json mins = Json::array();
  Json p95s = Json::array();
  for (const auto& p : r.normalization) {
    mins.push_back(p ? Json(p->min) : Json(nullptr));
    p95s.push_back(p ? Json(p->p95) : Json(nullptr));
  }
  j["normalization"] = {{"min", mins}, {"p95", p95s}};
  return j;
}

void write_report(const std::filesystem::path& dir, const Report& r, std::span<const BaselineRun> runs) {
  std::filesystem::create_directories(dir);
  write_file(dir / "scores.csv", scores_csv(r));
  write_file(dir / "normalization.csv", normalization_csv(r));
  write_file(dir / "errors.csv", errors_csv(r, runs));
  write_file(dir / "radar.json", radar_json(r).dump(2) + "\n");
}

SweepReport sweep_report(SweepKind kind, std::span<const BaselineRun> runs, const FeatureExtractor& extractor,
                         int jobs) {
  SweepReport out;
  out.kind = kind;
  std::vector<BaselineRun> points(runs.begin(), runs.end());
  std::vector<double> labels;
  for (auto& run : points) {
    if (run.tasks.empty()) throw Error(ErrorKind::kInvalidArgument, "sweep point '" + run.name + "' has no tasks");
    const EvalTask& first = run.tasks.front();
    for (const auto& t : run.tasks) {
      const bool same = kind == SweepKind::kN ? t.subset.size() == first.subset.size() : t.sigma == first.sigma;
      if (!same) {
        throw Error(ErrorKind::kInvalidArgument, "tasks of sweep point '" + run.name + "' disagree on " +
                                                     (kind == SweepKind::kN ? "n" : "sigma"));
      }
    }
    char buf[32];
    if (kind == SweepKind::kN) {
      labels.push_back(static_cast<double>(first.subset.size()));
      std::snprintf(buf, sizeof buf, "n=%zu", first.subset.size());
    } else {
      labels.push_back(first.sigma);
      std::snprintf(buf, sizeof buf, "sigma=%g", first.sigma);
    }
    run.name = buf;
  }

  if (kind == SweepKind::kN) {
    std::set<double> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) throw Error(ErrorKind::kInvalidArgument, "duplicate n in sweep");
    std::string missing;
    for (int n = 1; n <= static_cast<int>(kNumFeatures); ++n) {
      if (!seen.count(n)) missing += " n=" + std::to_string(n);
    }
    if (!missing.empty()) throw Error(ErrorKind::kIncompleteLedger, "n sweep is missing points:" + missing);
  }

  // Canonical order by sweep value.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return labels[a] < labels[b]; });
  std::vector<BaselineRun> sorted;
  std::vector<double> sorted_labels;
  for (auto i : order) {
    sorted.push_back(std::move(points[i]));
    sorted_labels.push_back(labels[i]);
  }

  out.report = build_report(sorted, extractor, jobs);
  const Report& r = out.report;

  if (kind == SweepKind::kSigma) {
    for (std::size_t b = 0; b < sorted.size(); ++b) out.sigma_rows.push_back({sorted_labels[b], r.scores[b]});
    return out;
  }

  // Per-example mean over every (k, control) error, then across examples.
  for (std::size_t b = 0; b < sorted.size(); ++b) {
    std::vector<double> sum(sorted[b].tasks.size(), 0.0);
    std::vector<std::size_t> count(sorted[b].tasks.size(), 0);
    for (const auto& rec : r.records) {
      if (rec.baseline != b) continue;
      for (const auto& e : rec.errors) {
        sum[rec.task] += report_normalize(e.error, *r.normalization[index_of(e.feature)]);
        ++count[rec.task];
      }
    }
    std::vector<double> means;
    for (std::size_t t = 0; t < sum.size(); ++t) {
      if (count[t] > 0) means.push_back(sum[t] / static_cast<double>(count[t]));
    }
    NSweepRow row;
    row.n = static_cast<int>(sorted_labels[b]);
    row.examples = means.size();
    if (!means.empty()) {
      double total = 0;
      for (double m : means) total += m;
      row.mean = total / static_cast<double>(means.size());
      double half = 0;
      if (means.size() > 1) {
        double ss = 0;
        for (double m : means) ss += (m - row.mean) * (m - row.mean);
        const double sd = std::sqrt(ss / static_cast<double>(means.size() - 1));
        half = 1.96 * sd / std::sqrt(static_cast<double>(means.size()));
      }
      row.ci_low = row.mean - half;
      row.ci_high = row.mean + half;
    }
    out.n_rows.push_back(row);
  }
  return out;
}

std::string sweep_csv(const SweepReport& s) {
  std::string out;
  if (s.kind == SweepKind::kN) {
    out = "n,examples,mean,ci_low,ci_high\n";
    for (const auto& row : s.n_rows) {
      out += std::to_string(row.n) + "," + std::to_string(row.examples) + "," + num(row.mean) + "," +
             num(row.ci_low) + "," + num(row.ci_high) + "\n";
    }
    return out;
  }
  out = "sigma";
  for (std::size_t i = 0; i < kNumFeatures; ++i) out += "," + std::string(name_of(feature_at(i)));
  out += "\n";
  for (const auto& row : s.sigma_rows) {
    out += num(row.sigma);
    for (const auto& v : row.scores) out += "," + (v ? num(*v) : std::string());
    out += "\n";
  }
  return out;
}

Json sweep_json(const SweepReport& s) {
  Json j;
  j["kind"] = s.kind == SweepKind::kN ? "n_sweep" : "sigma_sweep";
  Json rows = Json::array();
  if (s.kind == SweepKind::kN) {
    for (const auto& row : s.n_rows) {
      rows.push_back({{"n", row.n},
                      {"examples", row.examples},
                      {"mean", row.mean},
                      {"ci_low", row.ci_low},
                      {"ci_high", row.ci_high}});
    }
  } else {
    for (const auto& row : s.sigma_rows) {
      Json scores = Json::array();
      for (const auto& v : row.scores) scores.push_back(opt_json(v));
      rows.push_back({{"sigma", row.sigma}, {"scores", scores}});
    }
  }
  j["rows"] = rows;
  j["radar"] = radar_json(s.report);
  return j;
}

void write_sweep(const std::filesystem::path& dir, const SweepReport& s) {
  std::filesystem::create_directories(dir);
  const std::string stem = s.kind == SweepKind::kN ? "n_sweep" : "sigma_sweep";
  write_file(dir / (stem + ".csv"), sweep_csv(s));
  write_file(dir / (stem + ".json"), sweep_json(s).dump(2) + "\n");
  write_file(dir / "normalization.csv", normalization_csv(s.report));
}

}  // namespace lingctl
