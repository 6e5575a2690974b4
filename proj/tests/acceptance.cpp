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

// Runs every primary acceptance check and prints one PASS/FAIL line each.
// Exit status is 0 when every check ran; with --strict it is the number of
// failed checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ltamp/abstraction.hpp"
#include "ltamp/error.hpp"
#include "ltamp/experiments.hpp"
#include "ltamp/gr1.hpp"
#include "ltamp/reach_synth.hpp"
#include "ltamp/rfts.hpp"

using namespace ltamp;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Scenario bundled(const char* name) { return load_scenario(resolve_scenario(name)); }

Verdict c1_walk_step() {
  const auto t0 = Clock::now();
  const OwsRun run = run_ows(bundled("walk_step").ows);
  const double dt = since(t0);
  const bool ok = run.report.reachable && run.report.coverage >= 0.9 && dt < 300.0;
  return {ok, fmt("reachable=%d coverage=%.4f win1=%zu win2=%zu time=%.1fs", run.report.reachable,
                  run.report.coverage, run.report.win1, run.report.win2, dt)};
}

Verdict c2_robustness() {
  const Scenario s = bundled("pipm_ppm_robust");
  PolicyStore store;
  const OwsRun run = run_ows(s.ows);
  const PolicyHandle h =
      store.store(make_policy(policy_key(s.ows, {}, {}), s.ows, run.synthesis));
  if (!run.report.reachable) return {false, "synthesis not reachable"};
  SimulationSettings sim = s.sim;
  sim.r_sim = s.ows.r;
  sim.trials = 50;
  const auto starts = winning_starts(store.get(h), sim.trials, sim.seed);
  const MonteCarloReport rep = monte_carlo(store, h, starts, sim, false);
  return {rep.successes == 50 && rep.trials == 50,
          fmt("%d/%d ReachedGoal at r_sim=(%.2f, %.2f)", rep.successes, rep.trials, sim.r_sim.dx,
              sim.r_sim.dvx)};
}

Verdict c3_success_curve() {
  const Scenario s = bundled("success_curve");
  const SuccessCurve curve = success_curve(s.ows, s.levels, s.sim);
  std::ostringstream d;
  bool ok = true;
  double lowest = 1.0;
  for (std::size_t i = 0; i < curve.closed.size(); ++i) {
    const MonteCarloReport& r = curve.closed[i];
    const DisturbanceVector lv = s.levels[i];
    const bool covers = lv.dx >= s.sim.r_sim.dx && lv.dvx >= s.sim.r_sim.dvx;
    d << fmt("D%zu=%.1f%% ", i, 100.0 * r.rate());
    ok = ok && r.rate() >= 0.97;
    if (covers) ok = ok && r.successes == r.trials;
    if (i > 0) ok = ok && r.rate() >= curve.closed[i - 1].rate() - 0.01;
    lowest = std::min(lowest, r.rate());
  }
  const double open = curve.open.rate();
  d << fmt("open=%.1f%% (need <60%% and >=35 points below %.1f%%)", 100.0 * open, 100.0 * lowest);
  ok = ok && open < 0.60 && lowest - open >= 0.35;
  return {ok, d.str()};
}

Verdict c4_shrink() {
  const Scenario s = bundled("walk_step");
  const LevelSweep sweep = sweep_levels(s.ows, s.levels);
  std::ostringstream d;
  for (const OwsRun& r : sweep.runs) d << r.report.win1 << "/" << r.report.win2 << " ";
  d << "(win1/win2 per level)";
  return {sweep.runs.size() == 4 && sweep.nested(), d.str()};
}

Verdict c5_gr1() {
  const GameModel game = build_locomotion_game();
  Gr1Solution sol = solve_gr1(game);
  if (!sol.realizable()) return {false, "unrealizable"};
  const StrategyAutomaton& a = std::get<StrategyAutomaton>(sol.result);
  const SoundnessReport rep = gr1_soundness(game, a, 1000, 50, 2026);
  std::string missing;
  for (const std::string& r : rep.unexercised_robot_rules) missing += " " + r;
  return {rep.violations == 0 && rep.unexercised_robot_rules.empty() && rep.runs == 1000,
          fmt("%d runs, %d violations, %zu rules exercised, unexercised S_robot:%s", rep.runs,
              rep.violations, rep.exercised.size(), missing.empty() ? " none" : missing.c_str())};
}

Verdict c6_chained_steps() {
  const Scenario s = bundled("chained_steps");
  PolicyStore store;
  StepLibrary lib(s.library, store);
  const SequenceReport rep = run_sequence(s, lib);
  int distinct = 0;
  for (std::size_t i = 0; i < rep.starts.size(); ++i) {
    bool fresh = true;
    for (std::size_t j = 0; j < i; ++j) {
      fresh = fresh && !(rep.starts[j].x == rep.starts[i].x && rep.starts[j].vx == rep.starts[i].vx);
    }
    distinct += fresh && rep.runs[i].completed == 6;
  }
  bool kick_ok = false;
  std::string kick = "no kicked run";
  if (!rep.kicked.empty()) {
    const ScriptedRun& k = rep.kicked.front();
    bool reacted = false;
    for (const StepOutcome& o : k.outcomes) {
      reacted = reacted || !o.switched.empty() || o.kind == OutcomeKind::kSwitchedPolicy ||
                o.kind == OutcomeKind::kReplanned;
    }
    const bool finished = k.completed == 6 && !k.outcomes.empty() &&
                          k.outcomes.back().kind == OutcomeKind::kReachedGoal;
    kick_ok = reacted && finished;
    int switches = 0;
    for (const StepOutcome& o : k.outcomes) switches += static_cast<int>(o.switched.size());
    kick = fmt("kicked run %d/6 steps, %d policy switches", k.completed, switches);
  }
  return {distinct >= 6 && kick_ok,
          fmt("%d distinct starts complete 6/6; %s; library %d policies in %.0fs", distinct,
              kick.c_str(), rep.library_policies, rep.library_seconds)};
}

Verdict c7_manifolds() {
  // Disturbance-free flow stays on the manifold through its keyframe.
  struct Case {
    ModeKind mode;
    double omega;
    Keyframe kf;
  };
  std::vector<Case> cases;
  for (double w = 2.0; w <= 4.0 + 1e-9; w += 0.1) {
    for (Keyframe kf : {Keyframe{0.0, 0.5}, Keyframe{0.5, 0.6}, Keyframe{1.5, 0.6},
                        Keyframe{2.6, 1.0}, Keyframe{3.1, 0.8}}) {
      cases.push_back({ModeKind::kPipm, w, kf});
    }
    cases.push_back({ModeKind::kPpm, w, {0.6, 1.7}});
    cases.push_back({ModeKind::kPpm, w, {1.0, 1.29}});
  }
  for (double a = 1.0; a <= 3.0 + 1e-9; a += 0.1) {
    cases.push_back({ModeKind::kMcm, a, {2.0, 1.432}});
    cases.push_back({ModeKind::kSlm, -a, {1.0, 1.0}});
    cases.push_back({ModeKind::kSm, -a / 2.0, {1.0, 1.2}});
  }
  cases.push_back({ModeKind::kHm, 0.0, {0.5, 0.8}});
  double worst = 0.0;
  double kf_err = 0.0;
  for (const Case& c : cases) {
    const TemplateParams p{c.mode, c.omega, c.kf.contact_x};
    const RiemCoord at = riem_map(p, c.kf, c.kf.state());
    kf_err = std::max({kf_err, std::abs(at.sigma), std::abs(at.zeta)});
    ComState s = c.kf.state();
    for (int k = 0; k < 25; ++k) {
      s = rk4_step(p, s, 0.02);
      if (!(s.vx > 0.0)) break;
      worst = std::max(worst, std::abs(tangent_sigma(p, s, c.kf)));
    }
  }

  // Sampled one-step images stay inside the abstract successor box.
  struct Setup {
    UniformGrid grid;
    ModeAbstractionSpec spec;
  };
  const std::vector<Setup> setups = {
      {UniformGrid::covering({{-0.1, 0.7}, {0.1, 1.2}}, 0.005, 0.005),
       {{ModeKind::kPipm, 3.0, 0.0}, sample_controls(2.0, 4.0, 0.02), {0.05, 0.1}, 0.02, 0.0}},
      {UniformGrid::covering({{-0.1, 0.7}, {0.1, 1.2}}, 0.005, 0.005),
       {{ModeKind::kPipm, 3.0, 0.5}, sample_controls(2.0, 4.0, 0.02), {0.05, 0.1}, 0.02, 0.0}},
      {UniformGrid::covering({{0.6, 1.4}, {0.5, 1.8}}, 0.003, 0.003),
       {{ModeKind::kPpm, 3.0, 1.0}, sample_controls(2.0, 4.0, 0.02), {0.05, 0.1}, 0.02, 0.0}},
      {UniformGrid::covering({{1.5, 2.3}, {0.5, 1.8}}, 0.003, 0.003),
       {{ModeKind::kMcm, 2.0, 2.0}, sample_controls(1.0, 3.0, 0.02), {0.05, 0.1}, 0.02, 0.0}},
      {UniformGrid::covering({{0.4, 1.2}, {0.5, 1.0}}, 0.004, 0.004),
       {{ModeKind::kHm, 0.0, 0.0}, {0.0}, {0.05, 0.1}, 0.02, 0.0}},
  };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int samples = 0;
  int escapes = 0;
  for (const Setup& st : setups) {
    const ModeAbstraction abs(st.grid, st.spec);
    for (int done = 0; done < 2000;) {
      const int q = static_cast<int>(u(rng) * abs.num_states());
      const int a = static_cast<int>(u(rng) * abs.num_actions());
      if (!abs.enabled(q, a)) continue;
      const StateBox cell = st.grid.cell_box(q);
      const ComState x0{cell.x.lo + u(rng) * st.grid.eta_x, cell.vx.lo + u(rng) * st.grid.eta_v};
      const DisturbanceVector d{(2.0 * u(rng) - 1.0) * st.spec.r.dx,
                                (2.0 * u(rng) - 1.0) * st.spec.r.dvx};
      const ComState x1 = rk4_step(abs.control_params(a), x0, st.spec.step, d);
      const int c = st.grid.cell_of(x1);
      const SuccessorBox& b = abs.box(q, a);
      escapes += !(c >= 0 && b.x_lo <= st.grid.ix_of(c) && st.grid.ix_of(c) <= b.x_hi &&
                   b.v_lo <= st.grid.iv_of(c) && st.grid.iv_of(c) <= b.v_hi);
      ++done;
      ++samples;
    }
  }
  return {worst < 1e-6 && kf_err < 1e-12 && samples == 10000 && escapes == 0,
          fmt("max |sigma| drift %.2e over %zu flows, keyframe chart error %.1e, %d/%d samples "
              "escaped",
              worst, cases.size(), kf_err, escapes, samples)};
}

// Plain set iteration to the least fixpoint.
CellSet fixpoint_oracle(const TransitionSystem& ts, const CellSet& goal) {
  CellSet w = goal;
  std::vector<int> succ;
  for (bool grew = true; grew;) {
    grew = false;
    CellSet next = w;
    for (int q = 0; q < ts.num_states(); ++q) {
      if (w.test(q)) continue;
      for (int a = 0; a < ts.num_actions() && !next.test(q); ++a) {
        ts.successors(q, a, succ);
        if (succ.empty()) continue;
        if (std::all_of(succ.begin(), succ.end(), [&](int s) { return w.test(s); })) next.set(q);
      }
    }
    grew = next != w;
    w = next;
  }
  return w;
}

Verdict c8_oracle() {
  std::mt19937_64 rng(4242);
  int agree = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const int n = 4 + static_cast<int>(rng() % 97);
    const int m = 1 + static_cast<int>(rng() % 4);
    std::vector<std::vector<std::vector<int>>> succ(n, std::vector<std::vector<int>>(m));
    for (int q = 0; q < n; ++q) {
      for (int a = 0; a < m; ++a) {
        if (rng() % 5 == 0) continue;
        const int k = 1 + static_cast<int>(rng() % 3);
        for (int j = 0; j < k; ++j) {
          const int s = rng() % 3 == 0 ? static_cast<int>(rng() % n)
                                       : std::max(0, q - static_cast<int>(rng() % 3));
          succ[q][a].push_back(s);
        }
      }
    }
    const ExplicitTs ts(succ);
    CellSet goal(n), init(n);
    for (int q = 0; q < n; ++q) {
      if (rng() % 8 == 0) goal.set(q);
      if (rng() % 4 == 0) init.set(q);
    }
    if (goal.none()) goal.set(rng() % n);
    const ReachResult r = reachability_control(ts, init, goal);
    const CellSet oracle = fixpoint_oracle(ts, goal);
    agree += r.win == oracle && r.reachable == oracle.intersects(init);
  }
  return {agree == 50, fmt("%d/50 instances match the fixpoint oracle", agree)};
}

struct Check {
  const char* id;
  const char* title;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::vector<std::string> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else {
      only.emplace_back(argv[i]);
    }
  }
  const std::vector<Check> checks = {
      {"C1", "walking-step winning set", c1_walk_step},
      {"C2", "50-trial robustness at the synthesis bound", c2_robustness},
      {"C3", "success rate against the modelled bound", c3_success_curve},
      {"C4", "winning sets shrink with the bound", c4_shrink},
      {"C5", "GR(1) soundness", c5_gr1},
      {"C6", "six-step composition with a kick", c6_chained_steps},
      {"C7", "manifold and abstraction properties", c7_manifolds},
      {"C8", "reachability against the fixpoint oracle", c8_oracle},
  };
  int failed = 0;
  for (const Check& c : checks) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("[%s] %s %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", c.id, c.title,
                v.detail.c_str(), since(t0));
    std::fflush(stdout);
  }
  std::printf("%d failed\n", failed);
  return strict ? failed : 0;
}
