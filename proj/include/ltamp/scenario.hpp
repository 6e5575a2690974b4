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
// Scenario documents: every experiment parameter lives here, the CLI only
// picks files, seeds and trial counts.

#ifndef LTAMP_SCENARIO_HPP_
#define LTAMP_SCENARIO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltamp/reactive_planner.hpp"

namespace ltamp {

enum class ScenarioKind { kOws, kSequence, kReactive };

std::string_view scenario_kind_name(ScenarioKind k);

enum class StartRule {
  // The initial keyframe state.
  kKeyframe,
  // Uniform in the cells of the initial set inside the first winning set,
  // kept when the state maps into the initial margin.
  kWinning,
};

struct SimulationSettings {
  SamplerKind sampler = SamplerKind::kUniform;
  DisturbanceVector r_sim{0.05, 0.1};
  int trials = 50;
  std::uint64_t seed = 1;
  double hold = 0.02;
  int max_holds = 400;
  StartRule start = StartRule::kWinning;
  bool open_loop = false;
  OpenLoopSwitch open_loop_switch = OpenLoopSwitch::kPhase;
  std::vector<Kick> kicks;

  ExecConfig exec() const;
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::kOws;
  std::string description;

  // kOws: one step.
  OwsProblem ows;
  // Synthesis disturbance levels swept by the level experiments; the
  // step's own bound when empty.
  std::vector<DisturbanceVector> levels;

  // kSequence and kReactive.
  LibrarySettings library;
  StepSpec start;
  std::vector<StepSpec> steps;
  // Distinct initial states for sequence runs.
  int starts = 1;

  // kReactive. An interactive session starts from `initial_env`; a script
  // starts from its first event.
  std::vector<EnvEvent> script;
  bool interactive = false;
  EnvAction initial_env = EnvAction::kModeratelyDown;
  bool dynamics = true;
  double idle_timeout = 30.0;
  LevelTable table;

  SimulationSettings sim;

  PlannerConfig planner_config() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::filesystem::path& path);
// Looks in the working directory, then the bundled scenario directory.
std::filesystem::path resolve_scenario(const std::string& name_or_path);

// Keyframe, template and contact from {"mode", "omega", "keyframe", "contact"}.
StepSpec step_spec_from_json(const nlohmann::json& j, double default_omega);
nlohmann::json step_spec_to_json(const StepSpec& s);

}  // namespace ltamp

#endif  // LTAMP_SCENARIO_HPP_
