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

#include "ltamp/game.hpp"

#include <algorithm>
#include <set>

#include "ltamp/error.hpp"

namespace ltamp {
namespace {

std::vector<VertexSet> goal_sets(const std::vector<JusticeGoal>& goals,
                                 const VertexSet& valid, int num_sys) {
  std::vector<VertexSet> out;
  for (const JusticeGoal& g : goals) {
    VertexSet s(valid.size());
    for (auto v = valid.find_first(); v != VertexSet::npos; v = valid.find_next(v)) {
      const int iv = static_cast<int>(v);
      if (g.holds(iv / num_sys, iv % num_sys)) s.set(v);
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) out.push_back(valid);
  return out;
}

}  // namespace

GameModel::GameModel(int num_env, int num_sys, std::vector<SafetyRule> rules,
                     std::vector<JusticeGoal> env_justice,
                     std::vector<JusticeGoal> sys_justice)
    : num_env_(num_env),
      num_sys_(num_sys),
      rules_(std::move(rules)),
      env_justice_(std::move(env_justice)),
      sys_justice_(std::move(sys_justice)) {
  if (num_env <= 0 || num_sys <= 0) {
    throw Error(ErrorCode::kConfiguration, "game needs at least one move");
  }
  const auto nv = static_cast<std::size_t>(num_vertices());
  env_init_.resize(static_cast<std::size_t>(num_env));
  for (int e = 0; e < num_env; ++e) {
    env_init_[static_cast<std::size_t>(e)] = all_hold(RuleScope::kEnvInit, {e});
  }
  valid_.resize(nv);
  sys_init_.resize(nv);
  for (int v = 0; v < num_vertices(); ++v) {
    const RuleArgs a{env_of(v), sys_of(v)};
    if (!all_hold(RuleScope::kSysState, a)) continue;
    valid_.set(static_cast<std::size_t>(v));
    if (all_hold(RuleScope::kSysInit, a)) sys_init_.set(static_cast<std::size_t>(v));
  }

  std::vector<std::vector<int>> valid_by_env(static_cast<std::size_t>(num_env));
  for (auto v = valid_.find_first(); v != VertexSet::npos; v = valid_.find_next(v)) {
    const int iv = static_cast<int>(v);
    valid_by_env[static_cast<std::size_t>(env_of(iv))].push_back(sys_of(iv));
  }

  env_offsets_.assign(nv + 1, 0);
  sys_offsets_.assign(nv * static_cast<std::size_t>(num_env) + 1, 0);
  for (int v = 0; v < num_vertices(); ++v) {
    const auto uv = static_cast<std::size_t>(v);
    env_offsets_[uv] = static_cast<int>(env_targets_.size());
    std::vector<bool> env_ok(static_cast<std::size_t>(num_env), false);
    if (valid_.test(uv)) {
      for (int en = 0; en < num_env; ++en) {
        if (all_hold(RuleScope::kEnvTrans, {env_of(v), sys_of(v), en})) {
          env_targets_.push_back(en);
          env_ok[static_cast<std::size_t>(en)] = true;
        }
      }
    }
    for (int en = 0; en < num_env; ++en) {
      sys_offsets_[uv * static_cast<std::size_t>(num_env) + static_cast<std::size_t>(en)] =
          static_cast<int>(sys_targets_.size());
      if (!env_ok[static_cast<std::size_t>(en)]) continue;
      for (int yn : valid_by_env[static_cast<std::size_t>(en)]) {
        if (all_hold(RuleScope::kSysTrans, {env_of(v), sys_of(v), en, yn})) {
          sys_targets_.push_back(yn);
        }
      }
    }
  }
  env_offsets_[nv] = static_cast<int>(env_targets_.size());
  sys_offsets_.back() = static_cast<int>(sys_targets_.size());

  env_goal_sets_ = goal_sets(env_justice_, valid_, num_sys_);
  sys_goal_sets_ = goal_sets(sys_justice_, valid_, num_sys_);
}

bool GameModel::sys_initial(int e, int y) const {
  return env_initial(e) && sys_init_.test(static_cast<std::size_t>(vertex(e, y)));
}

std::span<const int> GameModel::env_successors(int v) const {
  const auto uv = static_cast<std::size_t>(v);
  return {env_targets_.data() + env_offsets_[uv],
          static_cast<std::size_t>(env_offsets_[uv + 1] - env_offsets_[uv])};
}

std::span<const int> GameModel::sys_successors(int v, int e_next) const {
  const std::size_t k = static_cast<std::size_t>(v) * static_cast<std::size_t>(num_env_) +
                        static_cast<std::size_t>(e_next);
  return {sys_targets_.data() + sys_offsets_[k],
          static_cast<std::size_t>(sys_offsets_[k + 1] - sys_offsets_[k])};
}

bool GameModel::all_hold(RuleScope scope, const RuleArgs& a) const {
  return first_violation(scope, a) == nullptr;
}

const SafetyRule* GameModel::first_violation(RuleScope scope,
                                             const RuleArgs& a) const {
  for (const SafetyRule& r : rules_) {
    if (r.scope == scope && !r.holds(a)) return &r;
  }
  return nullptr;
}

TraceReport check_trace(const GameModel& game,
                        std::span<const std::pair<int, int>> trace) {
  TraceReport report;
  std::set<std::string> exercised;
  std::vector<bool> env_met(game.env_justice().size(), false);
  std::vector<bool> sys_met(game.sys_justice().size(), false);

  const auto check = [&](int index, RuleScope scope, const RuleArgs& a) {
    for (const SafetyRule& r : game.rules()) {
      if (r.scope != scope) continue;
      if (!r.triggered || r.triggered(a)) exercised.insert(r.id);
      if (!r.holds(a)) report.violations.push_back({index, r.id});
    }
  };

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto [e, y] = trace[i];
    const int index = static_cast<int>(i);
    if (e < 0 || e >= game.num_env() || y < 0 || y >= game.num_sys()) {
      report.violations.push_back({index, "domain"});
      continue;
    }
    if (i == 0) {
      check(index, RuleScope::kEnvInit, {e});
      check(index, RuleScope::kSysInit, {e, y});
    } else {
      const auto [pe, py] = trace[i - 1];
      check(index, RuleScope::kEnvTrans, {pe, py, e});
      check(index, RuleScope::kSysTrans, {pe, py, e, y});
    }
    check(index, RuleScope::kSysState, {e, y});
    for (std::size_t g = 0; g < env_met.size(); ++g) {
      if (game.env_justice()[g].holds(e, y)) env_met[g] = true;
    }
    for (std::size_t g = 0; g < sys_met.size(); ++g) {
      if (game.sys_justice()[g].holds(e, y)) sys_met[g] = true;
    }
  }
  for (std::size_t g = 0; g < env_met.size(); ++g) {
    if (!env_met[g]) {
      report.warnings.push_back("env justice " + game.env_justice()[g].id +
                                " not visited");
    }
  }
  for (std::size_t g = 0; g < sys_met.size(); ++g) {
    if (!sys_met[g]) {
      report.warnings.push_back("sys justice " + game.sys_justice()[g].id +
                                " not visited");
    }
  }
  report.exercised.assign(exercised.begin(), exercised.end());
  return report;
}

}  // namespace ltamp
