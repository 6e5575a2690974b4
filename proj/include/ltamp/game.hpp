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

// Explicit two-player game graphs. A vertex is a pair (e, y): the
// environment picks the next e, then the system answers with the next y.

#ifndef LTAMP_GAME_HPP_
#define LTAMP_GAME_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace ltamp {

using VertexSet = boost::dynamic_bitset<>;

enum class RuleScope : std::uint8_t {
  kEnvInit,   // reads e
  kSysInit,   // reads e, y
  kEnvTrans,  // reads e, y, e_next
  kSysState,  // reads e, y; applies to every state
  kSysTrans,  // reads e, y, e_next, y_next
};

struct RuleArgs {
  int e = -1;
  int y = -1;
  int e_next = -1;
  int y_next = -1;
};

struct SafetyRule {
  std::string id;
  RuleScope scope = RuleScope::kSysState;
  // Not written out in the source specification; generated from the
  // surrounding pattern.
  bool pattern_filled = false;
  std::function<bool(const RuleArgs&)> holds;
  // Antecedent of the implication; a rule counts as exercised once it fires.
  // Empty means always.
  std::function<bool(const RuleArgs&)> triggered;
};

struct JusticeGoal {
  std::string id;
  std::function<bool(int e, int y)> holds;
};

class GameModel {
 public:
  GameModel(int num_env, int num_sys, std::vector<SafetyRule> rules,
            std::vector<JusticeGoal> env_justice,
            std::vector<JusticeGoal> sys_justice);

  int num_env() const { return num_env_; }
  int num_sys() const { return num_sys_; }
  int num_vertices() const { return num_env_ * num_sys_; }
  int vertex(int e, int y) const { return e * num_sys_ + y; }
  int env_of(int v) const { return v / num_sys_; }
  int sys_of(int v) const { return v % num_sys_; }

  // Vertices that satisfy every state constraint.
  const VertexSet& valid() const { return valid_; }
  bool env_initial(int e) const { return env_init_[static_cast<std::size_t>(e)]; }
  bool sys_initial(int e, int y) const;

  std::span<const int> env_successors(int v) const;
  // Allowed next y after the environment moved to e_next.
  std::span<const int> sys_successors(int v, int e_next) const;

  const std::vector<SafetyRule>& rules() const { return rules_; }
  const std::vector<JusticeGoal>& env_justice() const { return env_justice_; }
  const std::vector<JusticeGoal>& sys_justice() const { return sys_justice_; }
  // Justice goals as vertex sets; never empty (an absent list is "true").
  const std::vector<VertexSet>& env_goal_sets() const { return env_goal_sets_; }
  const std::vector<VertexSet>& sys_goal_sets() const { return sys_goal_sets_; }

  // First rule of `scope` that fails, or nullptr.
  const SafetyRule* first_violation(RuleScope scope, const RuleArgs& a) const;

 private:
  bool all_hold(RuleScope scope, const RuleArgs& a) const;

  int num_env_;
  int num_sys_;
  std::vector<SafetyRule> rules_;
  std::vector<JusticeGoal> env_justice_;
  std::vector<JusticeGoal> sys_justice_;
  std::vector<bool> env_init_;
  VertexSet valid_;
  VertexSet sys_init_;
  std::vector<int> env_offsets_;
  std::vector<int> env_targets_;
  std::vector<int> sys_offsets_;  // indexed by v * num_env + e_next
  std::vector<int> sys_targets_;
  std::vector<VertexSet> env_goal_sets_;
  std::vector<VertexSet> sys_goal_sets_;
};

struct Violation {
  int index = 0;
  std::string rule;
};

struct TraceReport {
  std::vector<Violation> violations;
  // Justice goals never met within the trace.
  std::vector<std::string> warnings;
  // Rule ids whose antecedent fired at least once.
  std::vector<std::string> exercised;
};

// Finite-trace monitor over a sequence of (e, y) states.
TraceReport check_trace(const GameModel& game,
                        std::span<const std::pair<int, int>> trace);

}  // namespace ltamp

#endif  // LTAMP_GAME_HPP_
