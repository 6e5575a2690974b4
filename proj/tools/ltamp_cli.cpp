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
// ltamp: task synthesis, reach synthesis, Monte-Carlo runs, scenario
// playback and the interactive session server.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltamp/automaton_io.hpp"
#include "ltamp/error.hpp"
#include "ltamp/experiments.hpp"
#include "ltamp/kernels.hpp"
#include "ltamp/policy_io.hpp"
#include "ltamp/ws_server.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ltamp;

namespace {

constexpr int kExitError = 1;
constexpr int kExitUnrealizable = 2;
constexpr int kExitInfeasible = 3;

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(1) + "\n"); }

Scenario scenario_arg(const std::string& name, const Common& c) {
  Scenario s = load_scenario(resolve_scenario(name));
  if (c.seed) s.sim.seed = *c.seed;
  if (c.trials) s.sim.trials = *c.trials;
  return s;
}

StrategyAutomaton automaton_for(const GameModel& game, const std::string& path) {
  if (!path.empty()) return load_automaton(path);
  Gr1Solution sol = solve_gr1(game);
  if (!sol.realizable()) throw Error(ErrorCode::kConfiguration, "task specification is unrealizable");
  return std::get<StrategyAutomaton>(sol.result);
}

void write_log(const fs::path& dir, const ExecutionLog& log) {
  fs::create_directories(dir);
  std::ofstream csv(dir / "log.csv");
  log.write_csv(csv);
  write_json(dir / "log.json", log.to_json());
  // Phase-space polyline per step for plotting.
  std::map<int, std::string> lines;
  char buf[96];
  for (const LogRecord& r : log.records) {
    std::string& s = lines[r.step];
    if (s.empty()) s = "x,vx\n";
    std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", r.x, r.vx);
    s += buf;
  }
  for (const auto& [step, text] : lines) {
    write_text(dir / ("polyline_" + std::to_string(step) + ".csv"), text);
  }
}

int cmd_synth_task(const std::string& out, bool contradiction) {
  LocomotionGameOptions opt;
  opt.inject_contradiction = contradiction;
  const GameModel game = build_locomotion_game(opt);
  Gr1Solution sol = solve_gr1(game);
  if (!sol.realizable()) {
    const Unrealizable& u = std::get<Unrealizable>(sol.result);
    json report = {{"realizable", false},
                   {"losing_env", u.losing_env},
                   {"losing_states", u.losing_states.size()}};
    std::cout << "unrealizable: " << u.losing_env.size()
              << " initial environment moves cannot be answered\n";
    if (!out.empty()) write_json(fs::path(out).replace_extension(".report.json"), report);
    return kExitUnrealizable;
  }
  const StrategyAutomaton& a = std::get<StrategyAutomaton>(sol.result);
  const fs::path path = out.empty() ? fs::path("automaton.json") : fs::path(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_automaton(a, path);
  std::cout << "realizable: " << a.nodes().size() << " nodes, " << a.num_edges()
            << " edges -> " << path.string() << "\n";
  return 0;
}

int cmd_synth_reach(const Scenario& s, int step, const std::string& out) {
  const fs::path dir = out.empty() ? fs::path("policies") / s.name : fs::path(out);
  PolicyStore store;
  json report = {{"scenario", s.name}, {"kernel", std::string(selected_kernel_name())}};
  bool feasible = true;
  if (s.kind == ScenarioKind::kOws) {
    const RftsOws rfts = build_rfts(s.ows, -1, -1, store);
    report["transitions"] = rfts.transitions.size();
    report["infeasible"] = rfts.infeasible;
    feasible = rfts.infeasible.empty() && rfts.has({}, {});
    report["center_reachable"] = rfts.has({}, {});
  } else if (s.kind == ScenarioKind::kSequence) {
    StepLibrary lib(s.library, store);
    StepSpec from = s.start;
    json steps = json::array();
    for (int k = 0; k < static_cast<int>(s.steps.size()); ++k) {
      if (step < 0 || step == k) {
        const StepEntry& e = lib.entry(from, s.steps[static_cast<std::size_t>(k)]);
        steps.push_back({{"step", k},
                         {"transitions", e.rfts.transitions.size()},
                         {"infeasible", e.rfts.infeasible},
                         {"seconds", e.seconds}});
        feasible = feasible && e.handle.has_value();
      }
      from = s.steps[static_cast<std::size_t>(k)];
    }
    report["steps"] = steps;
  } else {
    throw Error(ErrorCode::kConfiguration, "synth-reach needs an ows or sequence scenario");
  }
  save_store(dir, store);
  report["policies"] = store.size();
  write_json(dir / "synth_report.json", report);
  std::cout << report.dump() << "\n";
  return feasible ? 0 : kExitInfeasible;
}

std::optional<PolicyHandle> center_handle(const PolicyStore& store, const OwsProblem& p) {
  return store.find(policy_key(p, {}, {}));
}

int cmd_monte_carlo(const Scenario& s, const std::string& policy_dir, const std::string& out) {
  if (s.kind != ScenarioKind::kOws) {
    throw Error(ErrorCode::kConfiguration, "monte-carlo needs an ows scenario");
  }
  const fs::path dir = out.empty() ? fs::path("reports") / s.name : fs::path(out);
  fs::create_directories(dir);
  if (!s.levels.empty() && policy_dir.empty()) {
    // Level sweep: one controller per synthesis bound, same starts.
    const SuccessCurve curve = success_curve(s.ows, s.levels, s.sim);
    json levels = json::array();
    for (std::size_t i = 0; i < curve.closed.size(); ++i) {
      MonteCarloReport rep = curve.closed[i];
      rep.scenario = s.name;
      std::ofstream csv(dir / ("level_" + std::to_string(i) + ".csv"));
      rep.write_csv(csv);
      levels.push_back({{"synthesis", curve.sweep.runs[i].report.to_json()},
                        {"successes", rep.successes},
                        {"trials", rep.trials},
                        {"rate", rep.rate()}});
    }
    MonteCarloReport open = curve.open;
    open.scenario = s.name;
    std::ofstream csv(dir / "open_loop.csv");
    open.write_csv(csv);
    json j = {{"format", "ltamp-success-curve"},
              {"scenario", s.name},
              {"levels", levels},
              {"nested", curve.sweep.nested()},
              {"open_loop", {{"successes", open.successes}, {"trials", open.trials}, {"rate", open.rate()}}}};
    write_json(dir / "report.json", j);
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (policy_dir.empty()) throw Error(ErrorCode::kConfiguration, "--policies is required");
  const PolicyStore store = load_store(policy_dir);
  const auto h = center_handle(store, s.ows);
  if (!h) throw Error(ErrorCode::kIo, "no policy for the scenario step in " + policy_dir);
  const std::vector<ComState> starts =
      s.sim.start == StartRule::kWinning
          ? winning_starts(store.get(*h), s.sim.trials, s.sim.seed)
          : std::vector<ComState>(static_cast<std::size_t>(s.sim.trials), s.ows.kf_initial.state());
  MonteCarloReport rep = monte_carlo(store, *h, starts, s.sim, false);
  rep.scenario = s.name;
  {
    std::ofstream csv(dir / "trials.csv");
    rep.write_csv(csv);
  }
  json j = rep.to_json();
  if (s.sim.open_loop) {
    MonteCarloReport open = monte_carlo(store, *h, starts, s.sim, true);
    open.scenario = s.name;
    std::ofstream csv(dir / "open_loop.csv");
    open.write_csv(csv);
    j["open_loop"] = open.to_json();
  }
  write_json(dir / "report.json", j);
  std::cout << s.name << ": " << rep.successes << "/" << rep.trials << " ReachedGoal\n";
  return 0;
}

int cmd_run_scenario(const Scenario& s, const std::string& out, const std::string& automaton_path) {
  const fs::path dir = out.empty() ? fs::path("runs") / s.name : fs::path(out);
  fs::create_directories(dir);
  json summary = {{"scenario", s.name}, {"kind", scenario_kind_name(s.kind)}};
  if (s.kind == ScenarioKind::kOws) {
    PolicyStore store;
    const OwsRun run = run_ows(s.ows);
    const PolicyHandle h = store.store(make_policy(policy_key(s.ows, {}, {}), s.ows, run.synthesis));
    const std::vector<ComState> starts = winning_starts(store.get(h), std::max(1, s.sim.trials), s.sim.seed);
    ExecutionLog log;
    json trials = json::array();
    for (std::size_t t = 0; t < starts.size(); ++t) {
      auto d = make_sampler(s.sim.sampler, s.sim.r_sim, trial_seed(s.sim.seed, static_cast<int>(t)));
      const StepOutcome o = execute_ows(store, h, starts[t], *d, s.sim.exec(),
                                        {static_cast<int>(t), &log, {}});
      log.steps.push_back({static_cast<int>(t), std::string(outcome_name(o.kind)),
                           std::string(reason_name(o.reason)), o.handle, o.holds, "", "",
                           std::string(mode_name(s.ows.params2.mode)), ""});
      trials.push_back({{"outcome", outcome_name(o.kind)}, {"holds", o.holds}});
    }
    write_log(dir, log);
    summary["synthesis"] = run.report.to_json();
    summary["trials"] = trials;
  } else if (s.kind == ScenarioKind::kSequence) {
    PolicyStore store;
    StepLibrary lib(s.library, store);
    const SequenceReport rep = run_sequence(s, lib);
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
      write_log(dir / ("run_" + std::to_string(i)), rep.runs[i].log);
    }
    for (std::size_t i = 0; i < rep.kicked.size(); ++i) {
      write_log(dir / ("kicked_" + std::to_string(i)), rep.kicked[i].log);
    }
    summary["report"] = rep.to_json();
  } else {
    if (s.interactive) throw Error(ErrorCode::kConfiguration, "interactive scenarios run under serve");
    const GameModel game = build_locomotion_game();
    const StrategyAutomaton a = automaton_for(game, automaton_path);
    PolicyStore store;
    StepLibrary lib(s.library, store);
    ReactivePlanner planner(game, a, &lib, s.planner_config());
    planner.run(s.script);
    write_log(dir, planner.log());
    json decisions = json::array();
    for (const LocoState& ls : planner.trace()) {
      decisions.push_back({{"e", env_action_name(ls.env)},
                           {"q", keyframe_name(ls.keyframe)},
                           {"s", sys_action_name(ls.contact)},
                           {"p", mode_name(ls.mode)}});
    }
    const TraceReport tr = check_trace(game, to_game_trace(planner.trace()));
    summary["decisions"] = decisions;
    summary["trace_violations"] = tr.violations.size();
    json rejected = json::array();
    for (const PlannerStep& st : planner.steps()) {
      if (!st.rejected.empty()) rejected.push_back({{"index", st.index}, {"rule", st.rejected}});
    }
    summary["rejected"] = rejected;
  }
  write_json(dir / "summary.json", summary);
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

int cmd_serve(const std::string& scenario_name, int port, int sessions, const std::string& automaton_path) {
  const Scenario s = load_scenario(resolve_scenario(scenario_name));
  const GameModel game = build_locomotion_game();
  const StrategyAutomaton a = automaton_for(game, automaton_path);
  ServeOptions opt;
  opt.port = static_cast<unsigned short>(port);
  opt.idle_timeout = s.idle_timeout;
  opt.max_sessions = sessions;
  opt.on_listen = [](unsigned short p) {
    std::cout << "listening on ws://127.0.0.1:" << p << "\n" << std::flush;
  };
  const ServeResult r = serve([&] { return Session(game, a, s); }, opt);
  std::cout << "served " << r.sessions << " sessions, " << r.messages << " messages; ended: "
            << r.ended << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ltamp: reactive task and motion planning for template locomotion"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Override the scenario seed");
    sub->add_option("--trials", common.trials, "Override the trial count");
    sub->add_option("--out", common.out, "Output path");
  };

  bool contradiction = false;
  auto* task = app.add_subcommand("synth-task", "Synthesize the locomotion strategy automaton");
  task->add_flag("--inject-contradiction", contradiction, "Add an unsatisfiable system rule");
  task->add_option("--out", common.out, "Automaton file");

  std::string scenario;
  int step = -1;
  auto* reach = app.add_subcommand("synth-reach", "Synthesize walking-step controllers");
  reach->add_option("scenario", scenario, "Scenario name or file")->required();
  reach->add_option("--step", step, "Only this step of a sequence");
  add_common(reach);

  std::string policies;
  auto* mc = app.add_subcommand("monte-carlo", "Disturbed trials against stored controllers");
  mc->add_option("scenario", scenario, "Scenario name or file")->required();
  mc->add_option("--policies", policies, "Policy directory from synth-reach");
  add_common(mc);

  std::string automaton;
  auto* run = app.add_subcommand("run-scenario", "Execute a scenario and write logs");
  run->add_option("scenario", scenario, "Scenario name or file")->required();
  run->add_option("--automaton", automaton, "Automaton file; synthesized when absent");
  add_common(run);

  int port = 8765;
  int sessions = 0;
  auto* srv = app.add_subcommand("serve", "Serve the interactive session protocol over WebSocket");
  srv->add_option("scenario", scenario, "Reactive scenario")->default_val("interactive");
  srv->add_option("--port", port, "TCP port, 0 for any");
  srv->add_option("--sessions", sessions, "Stop after this many sessions");
  srv->add_option("--automaton", automaton, "Automaton file; synthesized when absent");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*task) return cmd_synth_task(common.out, contradiction);
    if (*reach) return cmd_synth_reach(scenario_arg(scenario, common), step, common.out);
    if (*mc) return cmd_monte_carlo(scenario_arg(scenario, common), policies, common.out);
    if (*run) return cmd_run_scenario(scenario_arg(scenario, common), common.out, automaton);
    if (*srv) return cmd_serve(scenario, port, sessions, automaton);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kInfeasibleStep ? kExitInfeasible : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
