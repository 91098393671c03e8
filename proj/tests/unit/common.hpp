/*
 * Copyright 2026 The tvopf Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

#include "tvopf/lifted.hpp"
#include "tvopf/network.hpp"

namespace tvopf::testing {

inline std::string case_path(const std::string& name) {
  return std::string(TVOPF_DATA_DIR) + "/cases/" + name;
}

inline ProblemInstance load_instance(const std::string& name, SlackMode mode = SlackMode::embedded) {
  return static_instance(make_formulation(parse_case(case_path(name)), mode));
}

}  // namespace tvopf::testing
