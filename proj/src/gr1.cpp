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

#include "ltamp/gr1.hpp"

#include <deque>
#include <string>

#include "ltamp/error.hpp"

namespace ltamp {
namespace {

struct GoalMemory {
  // ys[r]: states that reach the goal within r rounds.
  std::vector<VertexSet> ys;
  // xs[r][i]: states that wait in the i-th environment goal's complement.
  std::vector<std::vector<VertexSet>> xs;
};

class Solver {
 public:
  explicit Solver(const GameModel& game) : g_(game) {}

  // States from which the system can force the next state into `target`.
  VertexSet cpre(const VertexSet& target) const {
    const VertexSet& valid = g_.valid();
    VertexSet out(valid.size());
    for (auto v = valid.find_first(); v != VertexSet::npos; v = valid.find_next(v)) {
      const int iv = static_cast<int>(v);
      bool ok = true;
      for (int en : g_.env_successors(iv)) {
        bool found = false;
        for (int yn : g_.sys_successors(iv, en)) {
          if (target.test(static_cast<std::size_t>(g_.vertex(en, yn)))) {
            found = true;
            break;
          }
        }
        if (!found) {
          ok = false;
          break;
        }
      }
      if (ok) out.set(v);
    }
    return out;
  }

  VertexSet reach_goal(std::size_t j, const VertexSet& z, GoalMemory* mem) const {
    const std::vector<VertexSet>& env_goals = g_.env_goal_sets();
    const VertexSet into_z = g_.sys_goal_sets()[j] & cpre(z);
    VertexSet y(z.size());
    while (true) {
      const VertexSet start = into_z | cpre(y);
      VertexSet y_next(z.size());
      std::vector<VertexSet> xs;
      for (const VertexSet& je : env_goals) {
        const VertexSet avoid = ~je;
        VertexSet x = z;
        while (true) {
          VertexSet x_next = start | (avoid & cpre(x));
          if (x_next == x) break;
          x = std::move(x_next);
        }
        y_next |= x;
        xs.push_back(std::move(x));
      }
      if (mem != nullptr) {
        mem->ys.push_back(y_next);
        mem->xs.push_back(std::move(xs));
      }
      if (y_next == y) return y;
      y = std::move(y_next);
    }
  }

  VertexSet winning_region(std::vector<GoalMemory>& memory) const {
    const std::size_t goals = g_.sys_goal_sets().size();
    VertexSet z = g_.valid();
    while (true) {
      const VertexSet before = z;
      for (std::size_t j = 0; j < goals; ++j) z = reach_goal(j, z, nullptr);
      if (z == before) break;
    }
    memory.assign(goals, {});
    for (std::size_t j = 0; j < goals; ++j) reach_goal(j, z, &memory[j]);
    return z;
  }

 private:
  const GameModel& g_;
};

int first_in(const GameModel& g, std::span<const int> candidates, int e_next,
             const VertexSet& set) {
  for (int yn : candidates) {
    if (set.test(static_cast<std::size_t>(g.vertex(e_next, yn)))) return yn;
  }
  return -1;
}

}  // namespace

StrategyAutomaton::StrategyAutomaton(int num_env, std::vector<StrategyNode> nodes,
                                     const std::vector<StrategyEdge>& edges,
                                     std::vector<int> initial)
    : num_env_(num_env), nodes_(std::move(nodes)), initial_(std::move(initial)) {
  table_.assign(nodes_.size() * static_cast<std::size_t>(num_env_), -1);
  for (const StrategyEdge& e : edges) {
    if (e.from < 0 || static_cast<std::size_t>(e.from) >= nodes_.size() ||
        e.to < 0 || static_cast<std::size_t>(e.to) >= nodes_.size() ||
        e.env < 0 || e.env >= num_env_) {
      throw Error(ErrorCode::kIndex, "automaton edge out of range");
    }
    table_[static_cast<std::size_t>(e.from * num_env_ + e.env)] = e.to;
  }
}

std::vector<StrategyEdge> StrategyAutomaton::edges() const {
  std::vector<StrategyEdge> out;
  for (std::size_t k = 0; k < table_.size(); ++k) {
    if (table_[k] < 0) continue;
    const int from = static_cast<int>(k) / num_env_;
    out.push_back({from, static_cast<int>(k) % num_env_, table_[k]});
  }
  return out;
}

std::size_t StrategyAutomaton::num_edges() const {
  std::size_t n = 0;
  for (int t : table_) n += t >= 0 ? 1 : 0;
  return n;
}

int StrategyAutomaton::successor(int node, int env) const {
  if (node < 0 || static_cast<std::size_t>(node) >= nodes_.size() || env < 0 ||
      env >= num_env_) {
    return -1;
  }
  return table_[static_cast<std::size_t>(node * num_env_ + env)];
}

int StrategyAutomaton::initial_for(int env) const {
  for (int id : initial_) {
    if (nodes_[static_cast<std::size_t>(id)].e == env) return id;
  }
  return -1;
}

Gr1Solution solve_gr1(const GameModel& game) {
  const Solver solver(game);
  std::vector<GoalMemory> memory;
  Gr1Solution out;
  out.winning = solver.winning_region(memory);
  const VertexSet& z = out.winning;

  Unrealizable lost;
  std::vector<std::pair<int, int>> starts;
  for (int e = 0; e < game.num_env(); ++e) {
    if (!game.env_initial(e)) continue;
    int chosen = -1;
    for (int y = 0; y < game.num_sys(); ++y) {
      if (!game.sys_initial(e, y)) continue;
      if (z.test(static_cast<std::size_t>(game.vertex(e, y)))) {
        if (chosen < 0) chosen = y;
      } else {
        lost.losing_states.emplace_back(e, y);
      }
    }
    if (chosen < 0) {
      lost.losing_env.push_back(e);
    } else {
      starts.emplace_back(e, chosen);
    }
  }
  if (!lost.losing_env.empty()) {
    out.result = std::move(lost);
    return out;
  }

  const auto goals = static_cast<int>(memory.size());
  std::vector<int> ids(static_cast<std::size_t>(game.num_vertices() * goals), -1);
  std::vector<StrategyNode> nodes;
  std::vector<StrategyEdge> edges;
  std::deque<int> queue;
  const auto intern = [&](int e, int y, int j) {
    const std::size_t key = static_cast<std::size_t>(game.vertex(e, y) * goals + j);
    if (ids[key] < 0) {
      ids[key] = static_cast<int>(nodes.size());
      nodes.push_back({e, y, j});
      queue.push_back(ids[key]);
    }
    return ids[key];
  };

  std::vector<int> initial;
  for (const auto& [e, y] : starts) initial.push_back(intern(e, y, 0));

  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    const StrategyNode n = nodes[static_cast<std::size_t>(id)];
    const int v = game.vertex(n.e, n.y);
    const auto uv = static_cast<std::size_t>(v);
    const GoalMemory& mem = memory[static_cast<std::size_t>(n.goal)];
    for (int en : game.env_successors(v)) {
      const std::span<const int> cands = game.sys_successors(v, en);
      int yn = -1;
      int jn = n.goal;
      if (game.sys_goal_sets()[static_cast<std::size_t>(n.goal)].test(uv)) {
        yn = first_in(game, cands, en, z);
        jn = (n.goal + 1) % goals;
      } else {
        std::size_t r = 0;
        while (r < mem.ys.size() && !mem.ys[r].test(uv)) ++r;
        if (r == mem.ys.size()) {
          throw Error(ErrorCode::kInvalidState, "strategy left the winning region");
        }
        if (r > 0) yn = first_in(game, cands, en, mem.ys[r - 1]);
        if (yn < 0) {
          for (const VertexSet& x : mem.xs[r]) {
            if (!x.test(uv)) continue;
            yn = first_in(game, cands, en, x);
            break;
          }
        }
      }
      if (yn < 0) {
        throw Error(ErrorCode::kInvalidState, "no winning answer to env move " +
                                                  std::to_string(en));
      }
      const int to = intern(en, yn, jn);
      edges.push_back({id, en, to});
    }
  }
  out.result = StrategyAutomaton(game.num_env(), std::move(nodes), edges,
                                 std::move(initial));
  return out;
}

int strategy_step(const StrategyAutomaton& automaton, int node, int env) {
  const int next = automaton.successor(node, env);
  if (next < 0) {
    throw Error(ErrorCode::kAssumptionViolation,
                "environment move " + std::to_string(env) +
                    " not admissible at node " + std::to_string(node));
  }
  return next;
}

}  // namespace ltamp
