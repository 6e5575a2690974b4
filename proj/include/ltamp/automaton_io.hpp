// Copyright 2026 The ltamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON export and import of locomotion strategy automata.

#ifndef LTAMP_AUTOMATON_IO_HPP_
#define LTAMP_AUTOMATON_IO_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ltamp/gr1.hpp"

namespace ltamp {

nlohmann::json automaton_to_json(const StrategyAutomaton& automaton);
StrategyAutomaton automaton_from_json(const nlohmann::json& doc);

void save_automaton(const StrategyAutomaton& automaton,
                    const std::filesystem::path& path);
StrategyAutomaton load_automaton(const std::filesystem::path& path);

}  // namespace ltamp

#endif  // LTAMP_AUTOMATON_IO_HPP_
