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

// The locomotion contact-decision game: environment events against the
// robot's keyframe, contact configuration and template mode.

#ifndef LTAMP_LOCOMOTION_GAME_HPP_
#define LTAMP_LOCOMOTION_GAME_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ltamp/game.hpp"
#include "ltamp/gr1.hpp"
#include "ltamp/templates.hpp"

namespace ltamp {

enum class EnvAction : std::uint8_t {
  kModeratelyDown,
  kHugelyDown,
  kModeratelyUp,
  kHugelyUp,
  kCrackNormalCeiling,
  kCrackHighCeiling,
  kHumanAppears,
  kNarrowPassage,
};
inline constexpr int kNumEnvActions = 8;

// Contact configurations: leg {hind, dual, none} x arm {none, hind, fore,
// dual}, restricted to the nine used combinations.
enum class SysAction : std::uint8_t {
  kLegHindArmNone,
  kLegHindArmHind,
  kLegHindArmFore,
  kLegDualArmHind,
  kLegDualArmFore,
  kLegDualArmDual,
  kLegDualArmNone,
  kLegNoneArmFore,
  kLegNoneArmNone,
};
inline constexpr int kNumSysActions = 9;

// "e_md", ..., "e_np"; parsing also accepts the bare suffix.
std::string_view env_action_name(EnvAction e);
EnvAction env_action_from_name(std::string_view name);
bool is_emergency(EnvAction e);
// "s_lh-an", ...
std::string_view sys_action_name(SysAction s);
SysAction sys_action_from_name(std::string_view name);

struct LocoDecision {
  int keyframe = 0;
  SysAction contact = SysAction::kLegHindArmNone;
  ModeKind mode = ModeKind::kPipm;

  bool operator==(const LocoDecision&) const = default;
};

struct LocoState {
  int keyframe = 0;
  EnvAction env = EnvAction::kModeratelyDown;
  SysAction contact = SysAction::kLegHindArmNone;
  ModeKind mode = ModeKind::kPipm;
};

inline constexpr int kNumLocoSys = 27 * kNumSysActions * kNumModes;

// System index, lexicographic in (keyframe, contact, mode).
int encode_decision(const LocoDecision& d);
LocoDecision decode_decision(int y);

struct LocomotionGameOptions {
  // Adds a system rule that can never be met, for exercising the
  // unrealizable path.
  bool inject_contradiction = false;
};

GameModel build_locomotion_game(const LocomotionGameOptions& options = {});

// Keyframes allowed after `keyframe` when the next event is `next`.
std::vector<int> allowed_next_keyframes(int keyframe, EnvAction next);
// Whether a rule id belongs to a given family ("S_robot", "S_e", "S_q").
bool rule_in_family(std::string_view rule_id, std::string_view family);

struct LocoStep {
  int node = 0;
  LocoDecision decision;
};

LocoStep loco_strategy_step(const StrategyAutomaton& automaton, int node,
                            EnvAction next);
LocoState loco_state_of(const StrategyAutomaton& automaton, int node);

// The S_e rule an environment move breaks after `current`, or empty.
std::string env_rule_violated(const GameModel& game, const LocoState& current,
                              EnvAction next);

std::vector<std::pair<int, int>> to_game_trace(const std::vector<LocoState>& trace);

}  // namespace ltamp

#endif  // LTAMP_LOCOMOTION_GAME_HPP_
