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

// GR(1) synthesis on explicit game graphs by the triple-nested fixpoint,
// with strategy extraction into a finite automaton.

#ifndef LTAMP_GR1_HPP_
#define LTAMP_GR1_HPP_

#include <utility>
#include <variant>
#include <vector>

#include "ltamp/game.hpp"

namespace ltamp {

struct StrategyNode {
  int e = 0;
  int y = 0;
  // Index of the system justice goal currently pursued.
  int goal = 0;
};

struct StrategyEdge {
  int from = 0;
  int env = 0;
  int to = 0;
};

class StrategyAutomaton {
 public:
  StrategyAutomaton() = default;
  StrategyAutomaton(int num_env, std::vector<StrategyNode> nodes,
                    const std::vector<StrategyEdge>& edges,
                    std::vector<int> initial);

  int num_env() const { return num_env_; }
  const std::vector<StrategyNode>& nodes() const { return nodes_; }
  const std::vector<int>& initial() const { return initial_; }
  std::vector<StrategyEdge> edges() const;
  std::size_t num_edges() const;

  // -1 when the environment move is not admissible at `node`.
  int successor(int node, int env) const;
  // Initial node for the first environment move, or -1.
  int initial_for(int env) const;

 private:
  int num_env_ = 0;
  std::vector<StrategyNode> nodes_;
  std::vector<int> table_;
  std::vector<int> initial_;
};

struct Unrealizable {
  // Initial environment moves the system cannot answer from the winning
  // region.
  std::vector<int> losing_env;
  // Initial (e, y) states outside the winning region.
  std::vector<std::pair<int, int>> losing_states;
};

struct Gr1Solution {
  VertexSet winning;
  std::variant<StrategyAutomaton, Unrealizable> result;

  bool realizable() const {
    return std::holds_alternative<StrategyAutomaton>(result);
  }
};

Gr1Solution solve_gr1(const GameModel& game);

// Throws an assumption-violation error if `env` is not admissible.
int strategy_step(const StrategyAutomaton& automaton, int node, int env);

}  // namespace ltamp

#endif  // LTAMP_GR1_HPP_
