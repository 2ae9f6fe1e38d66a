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

// Python bindings. Feature vectors, control vectors and stats cross the
// boundary as plain dicts in the same shape as the JSONL files.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lingctl/controls.hpp"
#include "lingctl/errors.hpp"
#include "lingctl/eval.hpp"
#include "lingctl/extract.hpp"
#include "lingctl/io.hpp"
#include "lingctl/prompt.hpp"
#include "lingctl/version.hpp"

namespace py = pybind11;
using namespace lingctl;

namespace {

Json to_json_value(py::handle h) {
  if (h.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
  if (py::isinstance<py::int_>(h)) return h.cast<long long>();
  if (py::isinstance<py::float_>(h)) return h.cast<double>();
  if (py::isinstance<py::str>(h)) return h.cast<std::string>();
  if (py::isinstance<py::dict>(h)) {
    Json j = Json::object();
    for (auto item : h.cast<py::dict>()) j[py::str(item.first).cast<std::string>()] = to_json_value(item.second);
    return j;
  }
  if (py::isinstance<py::sequence>(h)) {
    Json j = Json::array();
    for (auto item : h.cast<py::sequence>()) j.push_back(to_json_value(item));
    return j;
  }
  throw Error(ErrorKind::kInvalidArgument, "unsupported value of type " + py::str(py::type::handle_of(h)).cast<std::string>());
}

py::object to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null:
      return py::none();
    case Json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case Json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case Json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case Json::value_t::number_float:
      return py::float_(j.get<double>());
    case Json::value_t::string:
      return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list l;
      for (const auto& v : j) l.append(to_py(v));
      return l;
    }
    case Json::value_t::object: {
      py::dict d;
      for (const auto& [k, v] : j.items()) d[py::str(k)] = to_py(v);
      return d;
    }
    default:
      return py::none();
  }
}

const FeatureExtractor& extractor() {
  static const FeatureExtractor e;
  return e;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "lingctl core bindings";
  m.attr("__version__") = kVersion;

  static py::exception<Error> error(m, "LingctlError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
      py::set_error(error, msg.c_str());
    }
  });

  m.def("feature_names", [] {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < kNumFeatures; ++i) names.emplace_back(name_of(feature_at(i)));
    return names;
  });

  m.def(
      "extract", [](const std::string& text) { return to_py(to_json(extractor().extract(text))); }, py::arg("text"),
      "The 14 features of text as a dict.");

  m.def(
      "validate",
      [](py::dict features) {
        std::vector<std::string> out;
        for (Rule r : validate(feature_vector_from_json(to_json_value(features))).violations) {
          out.emplace_back(rule_name(r));
        }
        return out;
      },
      py::arg("features"), "Names of the violated rules; empty when valid.");

  m.def(
      "fit_stats",
      [](py::sequence vectors, const std::string& source) {
        std::vector<FeatureVector> vs;
        for (auto v : vectors) vs.push_back(feature_vector_from_json(to_json_value(v)));
        return to_py(to_json(fit_stats(vs, source)));
      },
      py::arg("vectors"), py::arg("source") = "");

  m.def(
      "sample_control_vector",
      [](py::dict reference, double sigma, py::dict stats, std::uint64_t seed, std::uint64_t stream,
         int max_attempts) {
        const auto ref = feature_vector_from_json(to_json_value(reference));
        const auto st = stats_from_json(to_json_value(stats));
        FeatureVector v;
        {
          py::gil_scoped_release release;
          Rng rng = make_stream(seed, stream);
          v = sample_control_vector(ref, sigma, st, rng, max_attempts);
        }
        return to_py(to_json(v));
      },
      py::arg("reference"), py::arg("sigma"), py::arg("stats"), py::arg("seed") = 0, py::arg("stream") = 0,
      py::arg("max_attempts") = kDefaultMaxAttempts);

  m.def(
      "render_prompt",
      [](const std::string& instruction, const std::string& input, py::dict controls) {
        const auto p = render_prompt(instruction, input, control_vector_from_json(to_json_value(controls)));
        py::dict d;
        d["system"] = p.system;
        d["user"] = p.user;
        d["text"] = p.text();
        return d;
      },
      py::arg("instruction"), py::arg("input") = "", py::arg("controls") = py::dict());

  m.def(
      "parse_controls", [](const std::string& text) { return to_py(to_json(parse_controls(text))); },
      py::arg("text"));

  m.def(
      "l1_error",
      [](py::dict controls, const std::string& response) {
        py::dict d;
        for (const auto& e : l1_error(control_vector_from_json(to_json_value(controls)), response, extractor())) {
          d[py::str(std::string(name_of(e.feature)))] = e.error;
        }
        return d;
      },
      py::arg("controls"), py::arg("response"));

  m.def(
      "reward",
      [](py::dict target, const std::string& response, std::vector<std::string> subset, py::dict stats) {
        std::vector<Feature> fs;
        for (const auto& name : subset) {
          auto f = feature_by_name(name);
          if (!f) throw Error(ErrorKind::kInvalidArgument, "unknown feature '" + name + "'");
          fs.push_back(*f);
        }
        return reinforce_reward(feature_vector_from_json(to_json_value(target)), response, ControlSubset(fs),
                                RewardStats::from(stats_from_json(to_json_value(stats))), extractor());
      },
      py::arg("target"), py::arg("response"), py::arg("subset"), py::arg("stats"));
}
