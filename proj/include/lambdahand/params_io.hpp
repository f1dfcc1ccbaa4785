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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lambdahand/impedance.hpp"

namespace lambdahand {

// Parameter document: {"name": ..., "joints": [{"name", "inertia", "b1", "b2",
// "b3", "k1", "k2", "k3", "tau_max_flex", "tau_max_ext"}, ...]}.
struct ParamSet {
  std::string name;
  std::vector<ImpedanceParams> joints;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

nlohmann::json to_json(const ParamSet& set);
// Throws InputError on missing fields, InvalidParameter on bad values.
ParamSet param_set_from_json(const nlohmann::json& doc);

ParamSet load_param_set(const std::filesystem::path& path);
void save_param_set(const ParamSet& set, const std::filesystem::path& path);

// "wrist" (one joint) or "finger" (five independent finger joints).
// Throws InputError for other names.
ParamSet builtin_preset(const std::string& name);
std::vector<std::string> builtin_preset_names();

// A built-in name or a path to a parameter document.
ParamSet resolve_preset(const std::string& name_or_path);

}  // namespace lambdahand
