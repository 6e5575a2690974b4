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
// Experiment drivers shared by the CLI and the acceptance runner.

#ifndef LTAMP_EXPERIMENTS_HPP_
#define LTAMP_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltamp/scenario.hpp"

namespace ltamp {

// States drawn uniformly from the cells of init_cells & win1 and kept when
// they map into the initial margin.
std::vector<ComState> winning_starts(const OwsPolicy& policy, int n,
                                     std::uint64_t seed);

std::uint64_t trial_seed(std::uint64_t seed, int trial);

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  ComState start;
  OutcomeKind kind = OutcomeKind::kFailed;
  OutcomeReason reason = OutcomeReason::kNone;
  int holds = 0;
  ComState end;
  int switches = 0;
};

struct MonteCarloReport {
  std::string scenario;
  // "closed_loop" or "open_loop".
  std::string controller = "closed_loop";
  DisturbanceVector r_synth;
  DisturbanceVector r_sim;
  std::string sampler;
  int trials = 0;
  int successes = 0;
  double seconds = 0.0;
  std::vector<TrialRow> rows;

  double rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
  nlohmann::json to_json() const;
  void write_csv(std::ostream& out) const;
};

inline constexpr std::string_view kTrialCsvHeader =
    "trial,seed,x0,vx0,outcome,reason,holds,x,vx,switches";

MonteCarloReport monte_carlo(const PolicyStore& store, PolicyHandle handle,
                             const std::vector<ComState>& starts,
                             const SimulationSettings& sim, bool open_loop);

struct SynthesisReport {
  DisturbanceVector r;
  bool reachable = false;
  double coverage = 0.0;
  std::size_t init = 0;
  std::size_t goal = 0;
  std::size_t switch_cells = 0;
  std::size_t win1 = 0;
  std::size_t win2 = 0;
  double seconds = 0.0;

  nlohmann::json to_json() const;
};

struct OwsRun {
  OwsProblem problem;
  OwsSynthesis synthesis;
  SynthesisReport report;
};

OwsRun run_ows(const OwsProblem& problem);
SynthesisReport synthesis_report(const OwsProblem& p, const OwsSynthesis& s, double seconds);

struct LevelSweep {
  std::vector<OwsRun> runs;
  // Per consecutive pair: WIN of the larger bound inside WIN of the smaller.
  std::vector<bool> win1_nested;
  std::vector<bool> win2_nested;

  bool nested() const;
};

// Levels must be ordered by increasing bound.
LevelSweep sweep_levels(const OwsProblem& base,
                        const std::vector<DisturbanceVector>& levels);

struct SuccessCurve {
  LevelSweep sweep;
  std::vector<MonteCarloReport> closed;
  MonteCarloReport open;
};

// Every controller is simulated from the same starts, drawn from the
// winning set of the largest bound.
SuccessCurve success_curve(const OwsProblem& base,
                           const std::vector<DisturbanceVector>& levels,
                           const SimulationSettings& sim);

struct SequenceReport {
  std::vector<ComState> starts;
  std::vector<ScriptedRun> runs;
  // Present when the scenario defines kicks.
  std::vector<ScriptedRun> kicked;
  int library_policies = 0;
  double library_seconds = 0.0;

  int complete_runs() const;
  nlohmann::json to_json() const;
};

// Builds every step library up front, then runs `starts` initial states
// without kicks and one with.
SequenceReport run_sequence(const Scenario& scenario, StepLibrary& library);

struct WinningCellReport {
  int cells = 0;
  int runs = 0;
  int failures = 0;
  std::vector<int> failing_cells;
};

// Up to `max_cells` winning cells (all when 0), `runs` states each.
WinningCellReport check_winning_cells(const PolicyStore& store, PolicyHandle handle,
                                   int max_cells, int runs, std::uint64_t seed,
                                   const SimulationSettings& sim);

struct SoundnessReport {
  bool realizable = false;
  int runs = 0;
  int violations = 0;
  std::vector<std::string> exercised;
  std::vector<std::string> unexercised_robot_rules;
};

// Random admissible environment plays through the decision loop.
SoundnessReport gr1_soundness(const GameModel& game, const StrategyAutomaton& automaton,
                              int runs, int length, std::uint64_t seed);

}  // namespace ltamp

#endif  // LTAMP_EXPERIMENTS_HPP_
