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

#include "lambdahand/direction.hpp"

namespace lambdahand {

std::optional<Direction> parse_direction(std::string_view text) noexcept {
  if (text == "flexion" || text == "flex") return Direction::Flexion;
  if (text == "extension" || text == "ext") return Direction::Extension;
  if (text == "none" || text == "nomotion" || text == "rest") return Direction::NoMotion;
  return std::nullopt;
}

}  // namespace lambdahand
