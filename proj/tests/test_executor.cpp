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

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "ltamp/experiments.hpp"
#include "ltamp/rfts.hpp"

using namespace ltamp;

namespace {

struct Fixture {
  Scenario scenario = load_scenario(resolve_scenario("walk_step"));
  PolicyStore store;
  PolicyHandle handle = -1;

  Fixture() {
    const RftsOws rfts = build_rfts(scenario.ows, 0, 0, store);
    REQUIRE(rfts.has({}, {}));
    handle = rfts.transitions.front().action;
  }
  const OwsPolicy& policy() const { return store.get(handle); }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

std::string csv_of(const ExecutionLog& log) {
  std::ostringstream out;
  log.write_csv(out);
  return out.str();
}

}  // namespace

TEST_CASE("nominal start reaches the goal without disturbance") {
  Fixture& f = fixture();
  ZeroDisturbance none;
  const StepOutcome o = execute_ows(f.store, f.handle, f.scenario.ows.kf_initial.state(), none, {});
  CHECK(o.kind == OutcomeKind::kReachedGoal);
  CHECK(o.phase == 2);
  CHECK(o.holds > 0);
  CHECK(f.policy().cell_of(o.state) >= 0);
  CHECK(f.policy().goal_cells.test(static_cast<std::size_t>(f.policy().cell_of(o.state))));
}

TEST_CASE("disturbed runs from winning starts reach the goal") {
  Fixture& f = fixture();
  const std::vector<ComState> starts = winning_starts(f.policy(), 5, 3);
  REQUIRE(starts.size() == 5);
  for (int seed = 0; seed < 5; ++seed) {
    UniformDisturbance d(f.scenario.ows.r, static_cast<std::uint64_t>(seed));
    const StepOutcome o = execute_ows(f.store, f.handle, starts[static_cast<std::size_t>(seed)], d, {});
    CHECK(o.kind == OutcomeKind::kReachedGoal);
  }
}

TEST_CASE("a large kick leaves the winning set") {
  Fixture& f = fixture();
  ZeroDisturbance none;
  ExecConfig cfg;
  cfg.kicks = {{0, 0.1, 0.0, -0.4}};
  ExecutionLog log;
  const StepOutcome o = execute_ows(f.store, f.handle, f.scenario.ows.kf_initial.state(), none, cfg,
                                    {0, &log, {}});
  CHECK(o.kind == OutcomeKind::kReplanned);
  CHECK(o.reason == OutcomeReason::kOutOfWinningSet);
  bool kicked = false;
  for (const LogRecord& r : log.records) kicked = kicked || (r.flags & flags::kKick);
  CHECK(kicked);
}

TEST_CASE("abrupt change aborts before the switch") {
  Fixture& f = fixture();
  ZeroDisturbance none;
  const StepOutcome o = execute_ows(f.store, f.handle, f.scenario.ows.kf_initial.state(), none, {},
                                    {0, nullptr, [](int hold, double) { return hold == 3; }});
  CHECK(o.kind == OutcomeKind::kReplanned);
  CHECK(o.reason == OutcomeReason::kEnvironmentAbruptChange);
  CHECK(o.holds == 3);
}

TEST_CASE("hold budget ends in a timeout") {
  Fixture& f = fixture();
  ZeroDisturbance none;
  ExecConfig cfg;
  cfg.max_holds = 3;
  const StepOutcome o = execute_ows(f.store, f.handle, f.scenario.ows.kf_initial.state(), none, cfg);
  CHECK(o.kind == OutcomeKind::kFailed);
  CHECK(o.reason == OutcomeReason::kTimeout);
}

TEST_CASE("unknown key replans with no policy") {
  Fixture& f = fixture();
  PolicyKey key = f.policy().key;
  key.kf_final.apex_vx += 1.0;
  ZeroDisturbance none;
  const StepOutcome o = execute_ows(f.store, key, f.scenario.ows.kf_initial.state(), none, {});
  CHECK(o.kind == OutcomeKind::kReplanned);
  CHECK(o.reason == OutcomeReason::kNoPolicy);
}

TEST_CASE("start outside the winning set is rejected at once") {
  Fixture& f = fixture();
  ZeroDisturbance none;
  const StepOutcome o = execute_ows(f.store, f.handle, {0.0, 1.1}, none, {});
  CHECK(o.kind == OutcomeKind::kReplanned);
  CHECK(o.reason == OutcomeReason::kOutOfWinningSet);
  CHECK(o.holds == 0);
}

TEST_CASE("logs are byte-identical for a fixed seed") {
  Fixture& f = fixture();
  const ComState start = winning_starts(f.policy(), 1, 9).front();
  auto run = [&] {
    UniformDisturbance d(f.scenario.ows.r, 77);
    ExecutionLog log;
    execute_ows(f.store, f.handle, start, d, {}, {0, &log, {}});
    return csv_of(log);
  };
  const std::string a = run();
  CHECK(a.rfind(std::string(kLogCsvHeader), 0) == 0);
  CHECK(a == run());
  UniformDisturbance other(f.scenario.ows.r, 78);
  ExecutionLog log;
  execute_ows(f.store, f.handle, start, other, {}, {0, &log, {}});
  CHECK(csv_of(log) != a);
}

TEST_CASE("disturbance samplers") {
  const DisturbanceVector r{0.05, 0.1};
  UniformDisturbance u(r, 1);
  for (int i = 0; i < 1000; ++i) {
    const DisturbanceVector d = u.sample();
    REQUIRE(std::abs(d.dx) <= r.dx);
    REQUIRE(std::abs(d.dvx) <= r.dvx);
  }
  int signs[4] = {0, 0, 0, 0};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    VertexDisturbance v(r, seed);
    const DisturbanceVector d = v.sample();
    REQUIRE(std::abs(d.dx) == r.dx);
    REQUIRE(std::abs(d.dvx) == r.dvx);
    CHECK(v.sample().dx == d.dx);
    ++signs[(d.dx > 0) * 2 + (d.dvx > 0)];
  }
  for (int c : signs) CHECK(c > 20);
  CHECK(sampler_kind_from_name("vertex") == SamplerKind::kVertex);
  CHECK(make_sampler(SamplerKind::kNone, r, 0)->sample().dx == 0.0);
}

TEST_CASE("open loop follows the nominal plan without disturbance") {
  Fixture& f = fixture();
  ZeroDisturbance none;
  const StepOutcome o = execute_open_loop(f.policy(), f.scenario.ows.kf_initial.state(), none, {});
  CHECK(o.handle == -1);
  CHECK(o.kind == OutcomeKind::kReachedGoal);
}

TEST_CASE("every sampled winning cell reaches the goal") {
  Fixture& f = fixture();
  const WinningCellReport rep = check_winning_cells(f.store, f.handle, 200, 3, 11, f.scenario.sim);
  CHECK(rep.cells == 200);
  CHECK(rep.runs == 600);
  CHECK(rep.failures == 0);
}

TEST_CASE("monte carlo report rows and csv") {
  Fixture& f = fixture();
  SimulationSettings sim = f.scenario.sim;
  sim.trials = 4;
  const std::vector<ComState> starts = winning_starts(f.policy(), 4, sim.seed);
  const MonteCarloReport rep = monte_carlo(f.store, f.handle, starts, sim, false);
  CHECK(rep.trials == 4);
  CHECK(rep.rows.size() == 4);
  CHECK(rep.successes == 4);
  std::ostringstream out;
  rep.write_csv(out);
  CHECK(out.str().rfind(std::string(kTrialCsvHeader), 0) == 0);
  CHECK(rep.to_json()["format"] == "ltamp-monte-carlo");
  CHECK(trial_seed(5, 0) != trial_seed(5, 1));
}
