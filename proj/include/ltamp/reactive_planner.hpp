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
// Outer execution loop: environment events drive the strategy automaton,
// each decision becomes a walking step synthesized on demand and executed
// closed loop.

#ifndef LTAMP_REACTIVE_PLANNER_HPP_
#define LTAMP_REACTIVE_PLANNER_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltamp/executor.hpp"
#include "ltamp/gr1.hpp"
#include "ltamp/locomotion_game.hpp"
#include "ltamp/phase_plan.hpp"
#include "ltamp/rfts.hpp"

namespace ltamp {

struct ModeSettings {
  double omega = 3.0;
  ControlRange controls;
  Margin margin;
};

struct LibrarySettings {
  std::array<ModeSettings, kNumModes> modes = default_modes();
  DisturbanceVector r{0.05, 0.1};
  double step = 0.02;
  // Lattice every step grid is cut from.
  UniformGrid space = UniformGrid::covering({{-0.2, 3.8}, {0.1, 2.0}}, 0.005, 0.005);
  double pad_x = 0.2;
  double pad_v = 0.2;
  OwsProblem::SwitchCells switch_cells = OwsProblem::SwitchCells::kCenter;
  double switch_band = 1.0;
  CellPattern initial_pattern = CellPattern::kCenter;
  CellPattern final_pattern = CellPattern::kCenter;

  static std::array<ModeSettings, kNumModes> default_modes();
};

struct StepSpec {
  TemplateParams params;
  Keyframe kf;
  int contact = -1;
};

struct StepEntry {
  OwsProblem problem;
  RftsOws rfts;
  // Centre pair when admitted, else the first admitted transition.
  std::optional<PolicyHandle> handle;
  double seconds = 0.0;
};

// Walking-step controllers built on first request and kept in the store.
class StepLibrary {
 public:
  StepLibrary(LibrarySettings settings, PolicyStore& store);

  // Throws kInfeasibleStep when the nominal plan does not exist.
  OwsProblem problem(const StepSpec& from, const StepSpec& to) const;
  const StepEntry& entry(const StepSpec& from, const StepSpec& to);

  const LibrarySettings& settings() const { return settings_; }
  PolicyStore& store() { return store_; }
  const PolicyStore& store() const { return store_; }
  int built() const { return static_cast<int>(entries_.size()); }

 private:
  LibrarySettings settings_;
  PolicyStore& store_;
  std::map<std::string, StepEntry> entries_;
};

struct EnvEvent {
  EnvAction action = EnvAction::kModeratelyDown;
  // Arrives during the previous step at this elapsed phase.
  std::optional<double> abrupt_at;
};

struct PlannerConfig {
  ExecConfig exec;
  SamplerKind sampler = SamplerKind::kUniform;
  DisturbanceVector r_sim{0.05, 0.1};
  std::uint64_t seed = 1;
  // Off: decisions only, no synthesis or simulation.
  bool dynamics = true;
  LevelTable table;
};

struct PlannerStep {
  int index = 0;
  EnvAction env = EnvAction::kModeratelyDown;
  // Set when the event was refused; the rule id or "inadmissible".
  std::string rejected;
  int node = -1;
  LocoDecision decision;
  Keyframe target;
  bool executed = false;
  StepOutcome outcome;
};

class ReactivePlanner {
 public:
  // `library` may be null when config.dynamics is off.
  ReactivePlanner(const GameModel& game, const StrategyAutomaton& automaton,
                  StepLibrary* library, PlannerConfig config);

  // Starts from the node the strategy picks for `first`; the robot rests
  // on the chosen keyframe at contact 0.
  void reset(EnvAction first);
  // One environment event; `next_abrupt` is polled during the step.
  PlannerStep advance(const EnvEvent& e, std::optional<double> next_abrupt = {});
  // Runs a whole script; the first event initialises.
  void run(const std::vector<EnvEvent>& script);

  // Events the strategy accepts now.
  std::vector<EnvAction> admissible() const;
  bool started() const { return node_ >= 0; }
  int node() const { return node_; }
  LocoState loco_state() const;
  ComState state() const { return state_; }
  const StepSpec& origin() const { return origin_; }
  const std::vector<PlannerStep>& steps() const { return steps_; }
  const ExecutionLog& log() const { return log_; }
  // Automaton states visited, the initial one first.
  const std::vector<LocoState>& trace() const { return trace_; }
  std::optional<PolicyHandle> last_handle() const { return last_handle_; }

 private:
  StepSpec spec_for(const LocoDecision& d) const;
  void summarize(const PlannerStep& s);

  const GameModel& game_;
  const StrategyAutomaton& automaton_;
  StepLibrary* library_;
  PlannerConfig config_;
  int node_ = -1;
  int step_index_ = 0;
  StepSpec origin_;
  ComState state_;
  std::vector<PlannerStep> steps_;
  std::vector<LocoState> trace_;
  ExecutionLog log_;
  std::optional<PolicyHandle> last_handle_;
};

struct ScriptedRun {
  std::vector<StepOutcome> outcomes;
  ExecutionLog log;
  int completed = 0;
};

// Explicit step list without the automaton; stops at the first step that
// does not reach its goal. Kicks address steps by list position.
ScriptedRun run_step_sequence(StepLibrary& library, const StepSpec& start_spec,
                              ComState start, const std::vector<StepSpec>& steps,
                              const PlannerConfig& config);

}  // namespace ltamp

#endif  // LTAMP_REACTIVE_PLANNER_HPP_
