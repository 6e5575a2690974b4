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

#include "ltamp/locomotion_game.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "ltamp/error.hpp"
#include "ltamp/phase_plan.hpp"

namespace ltamp {
namespace {

using E = EnvAction;
using S = SysAction;
using M = ModeKind;

constexpr std::array<std::string_view, kNumEnvActions> kEnvNames = {
    "e_md", "e_hd", "e_mu", "e_hu", "e_tc_nc", "e_tc_hc", "e_ha", "e_np"};
constexpr std::array<std::string_view, kNumSysActions> kSysNames = {
    "s_lh-an", "s_lh-ah", "s_lh-af", "s_ld-ah", "s_ld-af",
    "s_ld-ad", "s_ld-an", "s_ln-af", "s_ln-an"};

E env(int e) { return static_cast<E>(e); }

struct Decoded {
  int q;
  S s;
  M p;
};

const std::array<Decoded, kNumLocoSys>& decoded() {
  static const auto table = [] {
    std::array<Decoded, kNumLocoSys> t{};
    for (int y = 0; y < kNumLocoSys; ++y) {
      t[static_cast<std::size_t>(y)] = {y / (kNumSysActions * kNumModes),
                                     static_cast<S>((y / kNumModes) % kNumSysActions),
                                     static_cast<M>(y % kNumModes)};
    }
    return t;
  }();
  return table;
}

const Decoded& dec(int y) { return decoded()[static_cast<std::size_t>(y)]; }

int walk(int j, int k) { return j * 3 + k; }
bool is_walk(int q) { return q < 9; }
int mirror(int q) { return walk(2 - q / 3, 2 - q % 3); }

std::vector<int> walk_shifts(int q, int min_total, int max_total) {
  std::vector<int> out;
  const int j = q / 3;
  const int k = q % 3;
  for (int dj = 0; dj <= 2; ++dj) {
    for (int dk = 0; dk <= 2; ++dk) {
      const int total = dj + dk;
      if (total < min_total || total > max_total) continue;
      if (j + dj > 2 || k + dk > 2) continue;
      out.push_back(walk(j + dj, k + dk));
    }
  }
  return out;
}

std::vector<int> moderately_down(int q) {
  if (!is_walk(q)) return {walk(0, 1), walk(1, 1), walk(2, 1)};
  return walk_shifts(q, 0, 1);
}

std::vector<int> hugely_down(int q) {
  if (!is_walk(q)) return {walk(0, 1), walk(1, 1), walk(2, 1)};
  if (q == walk(0, 0)) {
    return {walk(1, 0), walk(0, 1), walk(2, 0), walk(0, 2), walk(1, 1)};
  }
  if (q == walk(0, 1)) return {walk(0, 2), walk(1, 1), walk(1, 2)};
  if (q == walk(2, 1) || q == walk(1, 2) || q == walk(2, 2)) return {walk(2, 2)};
  return walk_shifts(q, 1, 2);
}

// Upward terrain lowers the levels the way downward terrain raises them.
std::vector<int> mirrored(const std::vector<int>& down) {
  std::vector<int> out;
  for (int q : down) out.push_back(mirror(q));
  return out;
}

bool listed_terrain(int q, E e) {
  if (e == E::kModeratelyUp || e == E::kHugelyUp) return false;
  const KeyframeLevel l = keyframe_level(q);
  if (l.behavior == Behavior::kBrachiation || l.behavior == Behavior::kStop) {
    return true;
  }
  if (!is_walk(q)) return false;
  return q == walk(0, 0) || q == walk(0, 1) || q == walk(2, 1) ||
         q == walk(1, 2) || q == walk(2, 2);
}

std::string terrain_family(E e) {
  switch (e) {
    case E::kModeratelyDown: return "S_q-1";
    case E::kHugelyDown: return "S_q-2";
    case E::kModeratelyUp: return "S_q-mu";
    default: return "S_q-hu";
  }
}

bool contact_is(S s, std::initializer_list<S> options) {
  return std::find(options.begin(), options.end(), s) != options.end();
}

SafetyRule state_rule(std::string id, std::function<bool(E)> when,
                      std::function<bool(S, M)> then) {
  SafetyRule r;
  r.id = std::move(id);
  r.scope = RuleScope::kSysState;
  r.holds = [when, then](const RuleArgs& a) {
    const Decoded& d = dec(a.y);
    return !when(env(a.e)) || then(d.s, d.p);
  };
  r.triggered = [when](const RuleArgs& a) { return when(env(a.e)); };
  return r;
}

SafetyRule env_rule(std::string id, E current, std::vector<E> banned) {
  SafetyRule r;
  r.id = std::move(id);
  r.scope = RuleScope::kEnvTrans;
  r.holds = [current, banned](const RuleArgs& a) {
    if (env(a.e) != current) return true;
    return std::find(banned.begin(), banned.end(), env(a.e_next)) == banned.end();
  };
  r.triggered = [current](const RuleArgs& a) { return env(a.e) == current; };
  return r;
}

SafetyRule keyframe_rule(std::string id, bool pattern_filled,
                         std::function<bool(int q, E next)> when,
                         std::vector<int> allowed) {
  std::uint32_t mask = 0;
  for (int q : allowed) mask |= 1u << q;
  SafetyRule r;
  r.id = std::move(id);
  r.scope = RuleScope::kSysTrans;
  r.pattern_filled = pattern_filled;
  r.holds = [when, mask](const RuleArgs& a) {
    if (!when(dec(a.y).q, env(a.e_next))) return true;
    return ((mask >> dec(a.y_next).q) & 1u) != 0;
  };
  r.triggered = [when](const RuleArgs& a) {
    return when(dec(a.y).q, env(a.e_next));
  };
  return r;
}

}  // namespace

std::string_view env_action_name(EnvAction e) {
  return kEnvNames[static_cast<std::size_t>(e)];
}

EnvAction env_action_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kEnvNames.size(); ++i) {
    if (kEnvNames[i] == name || kEnvNames[i].substr(2) == name) {
      return static_cast<EnvAction>(i);
    }
  }
  throw Error(ErrorCode::kIndex, "unknown environment action " + std::string(name));
}

bool is_emergency(EnvAction e) {
  return static_cast<int>(e) >= static_cast<int>(E::kCrackNormalCeiling);
}

std::string_view sys_action_name(SysAction s) {
  return kSysNames[static_cast<std::size_t>(s)];
}

SysAction sys_action_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSysNames.size(); ++i) {
    if (kSysNames[i] == name || kSysNames[i].substr(2) == name) {
      return static_cast<SysAction>(i);
    }
  }
  throw Error(ErrorCode::kIndex, "unknown contact configuration " + std::string(name));
}

int encode_decision(const LocoDecision& d) {
  if (d.keyframe < 0 || d.keyframe >= kNumKeyframeIds) {
    throw Error(ErrorCode::kIndex, "keyframe index out of range");
  }
  return (d.keyframe * kNumSysActions + static_cast<int>(d.contact)) * kNumModes +
         static_cast<int>(d.mode);
}

LocoDecision decode_decision(int y) {
  if (y < 0 || y >= kNumLocoSys) throw Error(ErrorCode::kIndex, "system index");
  const Decoded& d = dec(y);
  return {d.q, d.s, d.p};
}

std::vector<int> allowed_next_keyframes(int keyframe, EnvAction next) {
  std::vector<int> out;
  const auto range = [&](int first) {
    for (int i = 0; i < (first == 9 ? 9 : 3); ++i) out.push_back(first + i);
  };
  switch (next) {
    case E::kModeratelyDown: out = moderately_down(keyframe); break;
    case E::kHugelyDown: out = hugely_down(keyframe); break;
    case E::kModeratelyUp:
      out = is_walk(keyframe) ? mirrored(moderately_down(mirror(keyframe)))
                              : moderately_down(keyframe);
      break;
    case E::kHugelyUp:
      out = is_walk(keyframe) ? mirrored(hugely_down(mirror(keyframe)))
                              : hugely_down(keyframe);
      break;
    case E::kCrackNormalCeiling: range(9); break;
    case E::kCrackHighCeiling: range(21); break;
    case E::kHumanAppears: range(18); break;
    case E::kNarrowPassage: range(24); break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool rule_in_family(std::string_view rule_id, std::string_view family) {
  if (rule_id.substr(0, family.size()) != family) return false;
  if (rule_id.size() == family.size()) return true;
  const char next = rule_id[family.size()];
  return !(next >= '0' && next <= '9');
}

GameModel build_locomotion_game(const LocomotionGameOptions& options) {
  std::vector<SafetyRule> rules;

  SafetyRule env_init;
  env_init.id = "env-init";
  env_init.scope = RuleScope::kEnvInit;
  env_init.holds = [](const RuleArgs& a) { return !is_emergency(env(a.e)); };
  rules.push_back(env_init);

  // "Can not be a, b, nor c" is read as excluding each listed event; the
  // conjunction form would be vacuous with one event per step.
  rules.push_back(env_rule("S_e-1", E::kCrackHighCeiling,
                           {E::kCrackHighCeiling, E::kHumanAppears, E::kNarrowPassage}));
  rules.push_back(env_rule("S_e-2", E::kCrackNormalCeiling,
                           {E::kCrackHighCeiling, E::kHumanAppears, E::kNarrowPassage}));
  rules.push_back(env_rule("S_e-3", E::kNarrowPassage,
                           {E::kCrackNormalCeiling, E::kCrackHighCeiling}));

  SafetyRule sys_init;
  sys_init.id = "sys-init";
  sys_init.scope = RuleScope::kSysInit;
  sys_init.holds = [](const RuleArgs& a) {
    return !contact_is(dec(a.y).s, {S::kLegNoneArmFore, S::kLegNoneArmNone,
                                    S::kLegDualArmHind, S::kLegDualArmFore});
  };
  rules.push_back(sys_init);

  const auto is = [](E target) { return [target](E e) { return e == target; }; };
  const auto is_not = [](E target) { return [target](E e) { return e != target; }; };

  rules.push_back(state_rule(
      "S_robot-1a",
      [](E e) { return e == E::kModeratelyDown || e == E::kModeratelyUp; },
      [](S s, M p) {
        return (p == M::kPipm && s == S::kLegHindArmNone) ||
               (p == M::kMcm && contact_is(s, {S::kLegHindArmHind, S::kLegHindArmFore}));
      }));
  rules.push_back(state_rule("S_robot-1b", is(E::kHugelyUp), [](S s, M p) {
    return p == M::kMcm && s == S::kLegHindArmHind;
  }));
  rules.push_back(state_rule("S_robot-1c", is(E::kHugelyDown), [](S s, M p) {
    return p == M::kMcm && s == S::kLegHindArmFore;
  }));
  rules.push_back(state_rule("S_robot-2a", is(E::kCrackNormalCeiling), [](S s, M p) {
    return p == M::kPpm && s == S::kLegNoneArmFore;
  }));
  rules.push_back(state_rule("S_robot-2b", is_not(E::kCrackNormalCeiling), [](S s, M p) {
    return p != M::kPpm && s != S::kLegNoneArmFore;
  }));
  rules.push_back(state_rule("S_robot-3a", is(E::kHumanAppears), [](S s, M p) {
    return p == M::kSlm &&
           contact_is(s, {S::kLegDualArmHind, S::kLegDualArmFore, S::kLegDualArmNone});
  }));
  // Without a person in the way the dual-leg stance with an arm contact is
  // off limits; dual legs without arms stay available for sliding.
  rules.push_back(state_rule("S_robot-3b", is_not(E::kHumanAppears), [](S s, M p) {
    return p != M::kSlm && !contact_is(s, {S::kLegDualArmHind, S::kLegDualArmFore});
  }));
  rules.push_back(state_rule("S_robot-4a", is(E::kNarrowPassage), [](S s, M p) {
    return p == M::kSm && s == S::kLegDualArmNone;
  }));
  rules.push_back(state_rule("S_robot-4b", is_not(E::kNarrowPassage),
                             [](S, M p) { return p != M::kSm; }));
  rules.push_back(state_rule("S_robot-5a", is(E::kCrackHighCeiling), [](S s, M p) {
    return p == M::kHm && s == S::kLegNoneArmNone;
  }));
  rules.push_back(state_rule("S_robot-5b", is_not(E::kCrackHighCeiling), [](S s, M p) {
    return p != M::kHm && s != S::kLegNoneArmNone;
  }));

  for (E e : {E::kModeratelyDown, E::kHugelyDown, E::kModeratelyUp, E::kHugelyUp}) {
    for (int q = 0; q < kNumKeyframeIds; ++q) {
      rules.push_back(keyframe_rule(
          terrain_family(e) + ":" + keyframe_name(q), !listed_terrain(q, e),
          [q, e](int cur, E next) { return cur == q && next == e; },
          allowed_next_keyframes(q, e)));
    }
  }
  const std::array<std::pair<const char*, E>, 4> emergencies = {{
      {"S_q-3", E::kCrackNormalCeiling},
      {"S_q-4", E::kCrackHighCeiling},
      {"S_q-5", E::kHumanAppears},
      {"S_q-6", E::kNarrowPassage},
  }};
  for (const auto& [id, e] : emergencies) {
    rules.push_back(keyframe_rule(
        id, false, [e](int, E next) { return next == e; },
        allowed_next_keyframes(0, e)));
  }

  if (options.inject_contradiction) {
    SafetyRule r;
    r.id = "contradiction";
    r.scope = RuleScope::kSysState;
    r.holds = [](const RuleArgs& a) {
      const S s = dec(a.y).s;
      return s == S::kLegHindArmNone && s != S::kLegHindArmNone;
    };
    rules.push_back(r);
  }

  std::vector<JusticeGoal> env_goals;
  for (int e = 0; e < kNumEnvActions; ++e) {
    env_goals.push_back({std::string(kEnvNames[static_cast<std::size_t>(e)]),
                         [e](int ee, int) { return ee == e; }});
  }
  env_goals.push_back({"not-e_ha", [](int e, int) { return env(e) != E::kHumanAppears; }});
  env_goals.push_back({"not-e_np", [](int e, int) { return env(e) != E::kNarrowPassage; }});

  std::vector<JusticeGoal> sys_goals;
  const auto mode_goal = [](M m) {
    return JusticeGoal{"p_" + std::string(mode_name(m)),
                       [m](int, int y) { return dec(y).p == m; }};
  };
  const auto contact_goal = [](S s) {
    return JusticeGoal{std::string(sys_action_name(s)),
                       [s](int, int y) { return dec(y).s == s; }};
  };
  sys_goals.push_back(mode_goal(M::kPipm));
  sys_goals.push_back(contact_goal(S::kLegDualArmHind));
  sys_goals.push_back(contact_goal(S::kLegDualArmFore));
  sys_goals.push_back(contact_goal(S::kLegDualArmNone));
  for (M m : {M::kMcm, M::kPpm, M::kSlm, M::kHm, M::kSm}) sys_goals.push_back(mode_goal(m));

  return GameModel(kNumEnvActions, kNumLocoSys, std::move(rules),
                   std::move(env_goals), std::move(sys_goals));
}

LocoStep loco_strategy_step(const StrategyAutomaton& automaton, int node,
                            EnvAction next) {
  const int n = strategy_step(automaton, node, static_cast<int>(next));
  return {n, decode_decision(automaton.nodes()[static_cast<std::size_t>(n)].y)};
}

LocoState loco_state_of(const StrategyAutomaton& automaton, int node) {
  const StrategyNode& n = automaton.nodes().at(static_cast<std::size_t>(node));
  const LocoDecision d = decode_decision(n.y);
  return {d.keyframe, static_cast<EnvAction>(n.e), d.contact, d.mode};
}

std::string env_rule_violated(const GameModel& game, const LocoState& current,
                              EnvAction next) {
  const RuleArgs a{static_cast<int>(current.env),
                   encode_decision({current.keyframe, current.contact, current.mode}),
                   static_cast<int>(next)};
  const SafetyRule* r = game.first_violation(RuleScope::kEnvTrans, a);
  return r == nullptr ? std::string() : r->id;
}

std::vector<std::pair<int, int>> to_game_trace(const std::vector<LocoState>& trace) {
  std::vector<std::pair<int, int>> out;
  out.reserve(trace.size());
  for (const LocoState& s : trace) {
    out.emplace_back(static_cast<int>(s.env),
                     encode_decision({s.keyframe, s.contact, s.mode}));
  }
  return out;
}

}  // namespace ltamp
