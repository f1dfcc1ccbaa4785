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

#include "lambdahand/scenario/record.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "lambdahand/errors.hpp"

namespace lambdahand::scenario {

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols{
      "t",        "alpha_flex", "alpha_ext", "motion",          "gate",
      "tau_flex", "tau_ext",    "theta0",    "theta_eq",        "theta",
      "theta_dot", "theta_impedance", "theta_proportional", "motor_angle", "target"};
  return cols;
}

void write_record_csv(std::ostream& out, const ScenarioRecord& record) {
  const auto& cols = record_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  std::string line;
  for (const auto& r : record.rows) {
    line = fmt::format(
        "{:.9g},{:.9g},{:.9g},{},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},"
        "{:.9g}\n",
        r.t, r.alpha_flex, r.alpha_ext, to_string(r.motion), r.gate, r.tau_flex, r.tau_ext,
        r.theta0, r.theta_eq, r.theta, r.theta_dot, r.theta_impedance, r.theta_proportional,
        r.motor_angle, r.target);
    out << line;
  }
}

std::string record_csv(const ScenarioRecord& record) {
  std::ostringstream os;
  write_record_csv(os, record);
  return os.str();
}

void save_record_csv(const std::filesystem::path& path, const ScenarioRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write record {}", path.string()));
  write_record_csv(out, record);
}

namespace {

double parse_number(const std::string& cell, std::size_t lineno) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || *end != '\0') {
    throw InputError(fmt::format("record line {}: bad number '{}'", lineno, cell));
  }
  return v;
}

}  // namespace

ScenarioRecord read_record_csv(std::istream& in) {
  const auto& cols = record_columns();
  std::string line;
  if (!std::getline(in, line)) throw InputError("record is empty");
  std::string expected;
  for (std::size_t i = 0; i < cols.size(); ++i) expected += (i ? "," : "") + cols[i];
  if (line != expected) throw InputError(fmt::format("record header mismatch: '{}'", line));

  ScenarioRecord rec;
  std::size_t lineno = 1;
  std::vector<std::string> cells;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    cells.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != cols.size()) {
      throw InputError(fmt::format("record line {}: {} fields, expected {}", lineno, cells.size(),
                                   cols.size()));
    }
    RecordRow r;
    std::size_t k = 0;
    r.t = parse_number(cells[k++], lineno);
    r.alpha_flex = parse_number(cells[k++], lineno);
    r.alpha_ext = parse_number(cells[k++], lineno);
    const auto motion = parse_direction(cells[k++]);
    if (!motion) {
      throw InputError(fmt::format("record line {}: bad motion '{}'", lineno, cells[k - 1]));
    }
    r.motion = *motion;
    r.gate = static_cast<int>(parse_number(cells[k++], lineno));
    for (double* field : {&r.tau_flex, &r.tau_ext, &r.theta0, &r.theta_eq, &r.theta, &r.theta_dot,
                          &r.theta_impedance, &r.theta_proportional, &r.motor_angle, &r.target}) {
      *field = parse_number(cells[k++], lineno);
    }
    rec.rows.push_back(r);
  }
  return rec;
}

ScenarioRecord load_record_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open record {}", path.string()));
  return read_record_csv(in);
}

}  // namespace lambdahand::scenario
