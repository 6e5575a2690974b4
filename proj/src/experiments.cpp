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
#include "ltamp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <set>

#include "ltamp/error.hpp"

namespace ltamp {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json pair(double a, double b) { return json::array({a, b}); }

std::string sampler_name(SamplerKind k) {
  static constexpr const char* kNames[] = {"uniform", "worst_case", "vertex", "none"};
  return kNames[static_cast<int>(k)];
}

ComState sample_in(const StateBox& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(b.x.lo, b.x.hi);
  std::uniform_real_distribution<double> uv(b.vx.lo, b.vx.hi);
  const double x = ux(rng);
  return {x, uv(rng)};
}

bool nested(const CellSet& inner, const CellSet& outer) {
  return inner.is_subset_of(outer);
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return seed * 6364136223846793005ull + 1442695040888963407ull * static_cast<std::uint64_t>(trial + 1);
}

std::vector<ComState> winning_starts(const OwsPolicy& policy, int n,
                                     std::uint64_t seed) {
  std::vector<int> cells;
  for (std::size_t c = policy.init_cells.find_first(); c != CellSet::npos;
       c = policy.init_cells.find_next(c)) {
    if (policy.win1.test(c)) cells.push_back(static_cast<int>(c));
  }
  std::vector<ComState> out;
  if (cells.empty() || n <= 0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  for (long tries = 0; static_cast<int>(out.size()) < n && tries < 1000L * n; ++tries) {
    const ComState s = sample_in(policy.grid().cell_box(cells[pick(rng)]), rng);
    try {
      if (in_margin(policy.geometry.initial_set, s)) out.push_back(s);
    } catch (const Error&) {
    }
  }
  return out;
}

json MonteCarloReport::to_json() const {
  json rows_j = json::array();
  for (const TrialRow& r : rows) {
    rows_j.push_back({{"trial", r.trial},
                      {"seed", r.seed},
                      {"start", pair(r.start.x, r.start.vx)},
                      {"outcome", outcome_name(r.kind)},
                      {"reason", reason_name(r.reason)},
                      {"holds", r.holds},
                      {"end", pair(r.end.x, r.end.vx)},
                      {"switches", r.switches}});
  }
  return {{"format", "ltamp-monte-carlo"},
          {"scenario", scenario},
          {"controller", controller},
          {"r_synth", pair(r_synth.dx, r_synth.dvx)},
          {"r_sim", pair(r_sim.dx, r_sim.dvx)},
          {"sampler", sampler},
          {"trials", trials},
          {"successes", successes},
          {"rate", rate()},
          {"seconds", seconds},
          {"rows", rows_j}};
}

void MonteCarloReport::write_csv(std::ostream& out) const {
  out << kTrialCsvHeader << '\n';
  char buf[256];
  for (const TrialRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%llu,%.9g,%.9g,%s,%s,%d,%.9g,%.9g,%d\n", r.trial,
                  static_cast<unsigned long long>(r.seed), r.start.x, r.start.vx,
                  std::string(outcome_name(r.kind)).c_str(),
                  std::string(reason_name(r.reason)).c_str(), r.holds, r.end.x, r.end.vx,
                  r.switches);
    out << buf;
  }
}

MonteCarloReport monte_carlo(const PolicyStore& store, PolicyHandle handle,
                             const std::vector<ComState>& starts,
                             const SimulationSettings& sim, bool open_loop) {
  const auto t0 = Clock::now();
  const OwsPolicy& policy = store.get(handle);
  MonteCarloReport rep;
  rep.controller = open_loop ? "open_loop" : "closed_loop";
  rep.r_synth = policy.problem.r;
  rep.r_sim = sim.r_sim;
  rep.sampler = sampler_name(sim.sampler);
  const ExecConfig cfg = sim.exec();
  const int n = std::min<int>(sim.trials, static_cast<int>(starts.size()));
  for (int t = 0; t < n; ++t) {
    TrialRow row;
    row.trial = t;
    row.seed = trial_seed(sim.seed, t);
    row.start = starts[static_cast<std::size_t>(t)];
    auto d = make_sampler(sim.sampler, sim.r_sim, row.seed);
    const StepOutcome o = open_loop ? execute_open_loop(policy, row.start, *d, cfg)
                                    : execute_ows(store, handle, row.start, *d, cfg);
    row.kind = o.kind;
    row.reason = o.reason;
    row.holds = o.holds;
    row.end = o.state;
    row.switches = static_cast<int>(o.switched.size());
    rep.successes += o.kind == OutcomeKind::kReachedGoal;
    rep.rows.push_back(row);
  }
  rep.trials = n;
  rep.seconds = since(t0);
  return rep;
}

json SynthesisReport::to_json() const {
  return {{"r", pair(r.dx, r.dvx)}, {"reachable", reachable}, {"coverage", coverage},
          {"init", init},           {"goal", goal},           {"switch", switch_cells},
          {"win1", win1},           {"win2", win2},           {"seconds", seconds}};
}

SynthesisReport synthesis_report(const OwsProblem& p, const OwsSynthesis& s, double seconds) {
  SynthesisReport r;
  r.r = p.r;
  r.reachable = s.reachable();
  r.coverage = initial_coverage(s);
  r.init = s.init_cells.count();
  r.goal = s.goal_cells.count();
  r.switch_cells = s.switch_cells.count();
  r.win1 = s.first.win.count();
  r.win2 = s.second.win.count();
  r.seconds = seconds;
  return r;
}

OwsRun run_ows(const OwsProblem& problem) {
  const auto t0 = Clock::now();
  OwsRun run{problem, {}, {}};
  const OwsAbstractions abs = build_ows_abstractions(problem);
  run.synthesis = synthesize_ows(problem, abs);
  run.report = synthesis_report(problem, run.synthesis, since(t0));
  return run;
}

bool LevelSweep::nested() const {
  return std::all_of(win1_nested.begin(), win1_nested.end(), [](bool b) { return b; }) &&
         std::all_of(win2_nested.begin(), win2_nested.end(), [](bool b) { return b; });
}

LevelSweep sweep_levels(const OwsProblem& base,
                        const std::vector<DisturbanceVector>& levels) {
  LevelSweep sweep;
  for (const DisturbanceVector& r : levels) {
    OwsProblem p = base;
    p.r = r;
    sweep.runs.push_back(run_ows(p));
  }
  for (std::size_t i = 1; i < sweep.runs.size(); ++i) {
    const OwsSynthesis& lo = sweep.runs[i - 1].synthesis;
    const OwsSynthesis& hi = sweep.runs[i].synthesis;
    sweep.win1_nested.push_back(nested(hi.first.win, lo.first.win));
    sweep.win2_nested.push_back(nested(hi.second.win, lo.second.win));
  }
  return sweep;
}

SuccessCurve success_curve(const OwsProblem& base,
                           const std::vector<DisturbanceVector>& levels,
                           const SimulationSettings& sim) {
  if (levels.empty()) throw Error(ErrorCode::kConfiguration, "no disturbance levels");
  SuccessCurve curve;
  curve.sweep = sweep_levels(base, levels);
  PolicyStore store;
  std::vector<PolicyHandle> handles;
  for (const OwsRun& run : curve.sweep.runs) {
    handles.push_back(store.store(make_policy(policy_key(run.problem, {}, {}), run.problem,
                                              run.synthesis)));
  }
  const std::vector<ComState> starts =
      winning_starts(store.get(handles.back()), sim.trials, sim.seed);
  for (PolicyHandle h : handles) {
    curve.closed.push_back(monte_carlo(store, h, starts, sim, false));
  }
  curve.open = monte_carlo(store, handles.back(), starts, sim, true);
  return curve;
}

int SequenceReport::complete_runs() const {
  return static_cast<int>(std::count_if(runs.begin(), runs.end(), [](const ScriptedRun& r) {
    return r.completed == static_cast<int>(r.outcomes.size()) && !r.outcomes.empty() &&
           r.outcomes.back().kind == OutcomeKind::kReachedGoal;
  }));
}

json SequenceReport::to_json() const {
  auto run_j = [](const ScriptedRun& r) {
    json steps = json::array();
    for (const StepOutcome& o : r.outcomes) {
      steps.push_back({{"outcome", outcome_name(o.kind)},
                       {"reason", reason_name(o.reason)},
                       {"holds", o.holds},
                       {"switches", o.switched.size()},
                       {"end", pair(o.state.x, o.state.vx)}});
    }
    return json{{"completed", r.completed}, {"steps", steps}};
  };
  json runs_j = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    json j = run_j(runs[i]);
    j["start"] = pair(starts[i].x, starts[i].vx);
    runs_j.push_back(j);
  }
  json kicked_j = json::array();
  for (const ScriptedRun& r : kicked) kicked_j.push_back(run_j(r));
  return {{"format", "ltamp-sequence"},
          {"library_policies", library_policies},
          {"library_seconds", library_seconds},
          {"complete_runs", complete_runs()},
          {"runs", runs_j},
          {"kicked", kicked_j}};
}

SequenceReport run_sequence(const Scenario& sc, StepLibrary& library) {
  if (sc.steps.empty()) throw Error(ErrorCode::kConfiguration, "sequence without steps");
  SequenceReport rep;
  const auto t0 = Clock::now();
  StepSpec from = sc.start;
  std::optional<PolicyHandle> first;
  for (const StepSpec& to : sc.steps) {
    const StepEntry& e = library.entry(from, to);
    if (!first) first = e.handle;
    from = to;
  }
  rep.library_seconds = since(t0);
  rep.library_policies = library.store().size();

  PlannerConfig cfg = sc.planner_config();
  const std::vector<Kick> kicks = cfg.exec.kicks;
  cfg.exec.kicks.clear();
  if (sc.sim.start == StartRule::kWinning && first) {
    rep.starts = winning_starts(library.store().get(*first), sc.starts, sc.sim.seed);
  } else {
    rep.starts.assign(static_cast<std::size_t>(std::max(1, sc.starts)), sc.start.kf.state());
  }
  for (std::size_t i = 0; i < rep.starts.size(); ++i) {
    cfg.seed = sc.sim.seed + i;
    rep.runs.push_back(run_step_sequence(library, sc.start, rep.starts[i], sc.steps, cfg));
  }
  if (!kicks.empty() && !rep.starts.empty()) {
    cfg.exec.kicks = kicks;
    cfg.seed = sc.sim.seed;
    rep.kicked.push_back(run_step_sequence(library, sc.start, rep.starts[0], sc.steps, cfg));
  }
  return rep;
}

WinningCellReport check_winning_cells(const PolicyStore& store, PolicyHandle handle,
                                   int max_cells, int runs, std::uint64_t seed,
                                   const SimulationSettings& sim) {
  const OwsPolicy& p = store.get(handle);
  std::vector<int> cells;
  for (std::size_t c = p.win1.find_first(); c != CellSet::npos; c = p.win1.find_next(c)) {
    cells.push_back(static_cast<int>(c));
  }
  std::mt19937_64 rng(seed);
  if (max_cells > 0 && static_cast<int>(cells.size()) > max_cells) {
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(static_cast<std::size_t>(max_cells));
    std::sort(cells.begin(), cells.end());
  }
  const ExecConfig cfg = sim.exec();
  WinningCellReport rep;
  for (int c : cells) {
    const StateBox box = p.grid().cell_box(c);
    bool failed = false;
    for (int k = 0; k < runs; ++k) {
      const ComState s = sample_in(box, rng);
      auto d = make_sampler(sim.sampler, sim.r_sim, rng());
      const StepOutcome o = execute_ows(store, handle, s, *d, cfg);
      ++rep.runs;
      if (o.kind != OutcomeKind::kReachedGoal) {
        ++rep.failures;
        failed = true;
      }
    }
    if (failed) rep.failing_cells.push_back(c);
    ++rep.cells;
  }
  return rep;
}

SoundnessReport gr1_soundness(const GameModel& game, const StrategyAutomaton& automaton,
                              int runs, int length, std::uint64_t seed) {
  SoundnessReport rep;
  rep.realizable = true;
  std::mt19937_64 rng(seed);
  std::vector<EnvAction> firsts;
  for (int e = 0; e < kNumEnvActions; ++e) {
    if (automaton.initial_for(e) >= 0) firsts.push_back(static_cast<EnvAction>(e));
  }
  if (firsts.empty()) {
    rep.realizable = false;
    return rep;
  }
  std::set<std::string> exercised;
  PlannerConfig cfg;
  cfg.dynamics = false;
  for (int r = 0; r < runs; ++r) {
    ReactivePlanner planner(game, automaton, nullptr, cfg);
    planner.reset(firsts[std::uniform_int_distribution<std::size_t>(0, firsts.size() - 1)(rng)]);
    for (int i = 1; i < length; ++i) {
      const std::vector<EnvAction> ok = planner.admissible();
      if (ok.empty()) break;
      planner.advance({ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)], {}});
    }
    const TraceReport t = check_trace(game, to_game_trace(planner.trace()));
    rep.violations += static_cast<int>(t.violations.size());
    exercised.insert(t.exercised.begin(), t.exercised.end());
    ++rep.runs;
  }
  rep.exercised.assign(exercised.begin(), exercised.end());
  for (const SafetyRule& rule : game.rules()) {
    if (rule_in_family(rule.id, "S_robot") && !exercised.count(rule.id)) {
      rep.unexercised_robot_rules.push_back(rule.id);
    }
  }
  return rep;
}

}  // namespace ltamp
