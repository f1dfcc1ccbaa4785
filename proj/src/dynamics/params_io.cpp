// Copyright 2026 The lambdahand Authors
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

#include "lambdahand/params_io.hpp"

#include <array>
#include <fstream>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand {

namespace {

constexpr std::array<const char*, 5> kFingerNames = {"thumb", "index", "middle", "ring",
                                                     "little"};

double number_field(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw InputError(fmt::format("parameter field '{}' missing or not a number", key));
  }
  return it->get<double>();
}

}  // namespace

nlohmann::json to_json(const ParamSet& set) {
  nlohmann::json joints = nlohmann::json::array();
  for (const auto& p : set.joints) {
    joints.push_back({{"name", p.name},
                      {"inertia", p.inertia},
                      {"b1", p.b1},
                      {"b2", p.b2},
                      {"b3", p.b3},
                      {"k1", p.k1},
                      {"k2", p.k2},
                      {"k3", p.k3},
                      {"tau_max_flex", p.tau_max_flex},
                      {"tau_max_ext", p.tau_max_ext}});
  }
  return {{"name", set.name}, {"joints", joints}};
}

ParamSet param_set_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("parameter document must be a JSON object");
  auto joints = doc.find("joints");
  if (joints == doc.end() || !joints->is_array() || joints->empty()) {
    throw InputError("parameter document needs a non-empty 'joints' array");
  }
  ParamSet set;
  set.name = doc.value("name", std::string{});
  for (const auto& j : *joints) {
    if (!j.is_object()) throw InputError("each joint entry must be an object");
    ImpedanceParams p;
    p.name = j.value("name", fmt::format("joint{}", set.joints.size()));
    p.inertia = number_field(j, "inertia");
    p.b1 = number_field(j, "b1");
    p.b2 = number_field(j, "b2");
    p.b3 = number_field(j, "b3");
    p.k1 = number_field(j, "k1");
    p.k2 = number_field(j, "k2");
    p.k3 = number_field(j, "k3");
    p.tau_max_flex = number_field(j, "tau_max_flex");
    p.tau_max_ext = number_field(j, "tau_max_ext");
    p.validate();
    set.joints.push_back(std::move(p));
  }
  return set;
}

ParamSet load_param_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open parameter file {}", path.string()));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
  return param_set_from_json(doc);
}

void save_param_set(const ParamSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write parameter file {}", path.string()));
  out << to_json(set).dump(2) << '\n';
}

ParamSet builtin_preset(const std::string& name) {
  if (name == "wrist") {
    return {"wrist", {ImpedanceParams::wrist()}};
  }
  if (name == "finger") {
    ParamSet set{"finger", {}};
    for (const char* finger : kFingerNames) {
      ImpedanceParams p = ImpedanceParams::finger();
      p.name = finger;
      set.joints.push_back(std::move(p));
    }
    return set;
  }
  throw InputError(fmt::format("unknown preset '{}'", name));
}

std::vector<std::string> builtin_preset_names() { return {"finger", "wrist"}; }

ParamSet resolve_preset(const std::string& name_or_path) {
  if (name_or_path == "wrist" || name_or_path == "finger") {
    return builtin_preset(name_or_path);
  }
  return load_param_set(name_or_path);
}

}  // namespace lambdahand
