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

#include "ltamp/automaton_io.hpp"

#include <fstream>

#include "ltamp/error.hpp"
#include "ltamp/locomotion_game.hpp"

namespace ltamp {

using nlohmann::json;

json automaton_to_json(const StrategyAutomaton& automaton) {
  json nodes = json::array();
  const auto& ns = automaton.nodes();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const LocoDecision d = decode_decision(ns[i].y);
    nodes.push_back({{"id", i},
                     {"q", d.keyframe},
                     {"e", ns[i].e},
                     {"s", static_cast<int>(d.contact)},
                     {"p", static_cast<int>(d.mode)},
                     {"goal_index", ns[i].goal}});
  }
  json edges = json::array();
  for (const StrategyEdge& e : automaton.edges()) {
    edges.push_back({{"from", e.from}, {"env", e.env}, {"to", e.to}});
  }
  return {{"format", "ltamp-automaton"},
          {"version", 1},
          {"num_env", automaton.num_env()},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"initial", automaton.initial()}};
}

StrategyAutomaton automaton_from_json(const json& doc) {
  try {
    if (doc.at("format") != "ltamp-automaton") {
      throw Error(ErrorCode::kIo, "not an automaton document");
    }
    std::vector<StrategyNode> nodes;
    for (const json& n : doc.at("nodes")) {
      if (n.at("id").get<std::size_t>() != nodes.size()) {
        throw Error(ErrorCode::kIo, "automaton node ids must be dense");
      }
      const int y = encode_decision({n.at("q").get<int>(),
                                     static_cast<SysAction>(n.at("s").get<int>()),
                                     static_cast<ModeKind>(n.at("p").get<int>())});
      nodes.push_back({n.at("e").get<int>(), y, n.at("goal_index").get<int>()});
    }
    std::vector<StrategyEdge> edges;
    for (const json& e : doc.at("edges")) {
      edges.push_back({e.at("from").get<int>(), e.at("env").get<int>(),
                       e.at("to").get<int>()});
    }
    return StrategyAutomaton(doc.at("num_env").get<int>(), std::move(nodes), edges,
                             doc.at("initial").get<std::vector<int>>());
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kIo, std::string("malformed automaton: ") + ex.what());
  }
}

void save_automaton(const StrategyAutomaton& automaton,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << automaton_to_json(automaton).dump(1) << '\n';
}

StrategyAutomaton load_automaton(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  try {
    return automaton_from_json(json::parse(in));
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kIo, std::string("malformed automaton: ") + ex.what());
  }
}

}  // namespace ltamp
