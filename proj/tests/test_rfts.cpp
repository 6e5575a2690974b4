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

#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "ltamp/abstraction_cache.hpp"
#include "ltamp/experiments.hpp"
#include "ltamp/policy_io.hpp"
#include "ltamp/rfts.hpp"

using namespace ltamp;
namespace fs = std::filesystem;

namespace {

OwsProblem walk_step() { return load_scenario(resolve_scenario("walk_step")).ows; }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ltamp_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void check_same(const OwsPolicy& a, const OwsPolicy& b) {
  CHECK(a.key == b.key);
  CHECK(a.reachable == b.reachable);
  CHECK(a.win1 == b.win1);
  CHECK(a.win2 == b.win2);
  CHECK(a.init_cells == b.init_cells);
  CHECK(a.goal_cells == b.goal_cells);
  CHECK(a.switch_cells == b.switch_cells);
  CHECK(a.chosen1 == b.chosen1);
  CHECK(a.chosen2 == b.chosen2);
  CHECK(a.controls1 == b.controls1);
  CHECK(a.controls2 == b.controls2);
  CHECK(a.grid().num_cells() == b.grid().num_cells());
}

}  // namespace

TEST_CASE("centre pair is admitted for the nominal walking step") {
  PolicyStore store;
  const RftsOws rfts = build_rfts(walk_step(), 0, 0, store);
  CHECK(rfts.infeasible.empty());
  REQUIRE(rfts.has({}, {}));
  CHECK(store.size() == 1);
  const OwsPolicy& p = store.get(rfts.transitions.front().action);
  CHECK(p.reachable);
  CHECK(p.win1.count() > 0);
}

TEST_CASE("an inflated disturbance removes the centre transition") {
  OwsProblem p = walk_step();
  p.r = {p.r.dx * 8.0, p.r.dvx * 8.0};
  PolicyStore store;
  const RftsOws rfts = build_rfts(p, 0, 0, store);
  CHECK_FALSE(rfts.has({}, {}));
  CHECK(rfts.transitions.empty());
}

TEST_CASE("a backward keyframe yields no transitions") {
  OwsProblem p = walk_step();
  std::swap(p.kf_initial, p.kf_final);
  p.params1.contact_x = p.kf_initial.contact_x;
  p.params2.contact_x = p.kf_final.contact_x;
  PolicyStore store;
  const RftsOws rfts = build_rfts(p, 0, 0, store);
  CHECK(rfts.transitions.empty());
  CHECK_FALSE(rfts.infeasible.empty());
  CHECK(store.size() == 0);
}

TEST_CASE("cross pattern synthesizes each neighbour pair") {
  OwsProblem p = walk_step();
  RftsOptions opt;
  opt.initial_pattern = CellPattern::kCross;
  PolicyStore store;
  const RftsOws rfts = build_rfts(p, 0, 0, store, opt);
  CHECK(rfts.initial_cells.size() == 5);
  CHECK(rfts.initial_cells.front() == RiemCell{});
  for (const RftsTransition& t : rfts.transitions) {
    CHECK(store.get(t.action).reachable);
    CHECK(store.get(t.action).key.cell_initial == t.initial);
  }
  const RftsOws back = rfts_from_json(rfts_to_json(rfts));
  CHECK(back.transitions.size() == rfts.transitions.size());
  CHECK(rfts_to_json(back) == rfts_to_json(rfts));
}

TEST_CASE("policy json round trip is exact") {
  PolicyStore store;
  const RftsOws rfts = build_rfts(walk_step(), 0, 0, store);
  REQUIRE(rfts.has({}, {}));
  const OwsPolicy& p = store.get(0);
  const OwsPolicy q = policy_from_json(policy_to_json(p));
  check_same(p, q);
  CHECK(policy_to_json(q).dump() == policy_to_json(p).dump());

  const fs::path dir = scratch("store");
  save_store(dir, store);
  const PolicyStore loaded = load_store(dir);
  REQUIRE(loaded.size() == 1);
  check_same(p, loaded.get(0));
  CHECK(loaded.find(p.key).has_value());
}

TEST_CASE("problem json keeps every field") {
  OwsProblem p = walk_step();
  p.switch_cells = OwsProblem::SwitchCells::kTouch;
  p.switch_band = 2.5;
  p.switch_x = Interval{0.1, 0.3};
  const OwsProblem q = problem_from_json(problem_to_json(p));
  CHECK(problem_to_json(q) == problem_to_json(p));
  CHECK(q.switch_band == 2.5);
  CHECK(q.switch_cells == OwsProblem::SwitchCells::kTouch);
}

TEST_CASE("abstraction cache round trip") {
  const OwsProblem p = walk_step();
  ModeAbstractionSpec spec{p.params1, p.controls1.samples(), p.r, p.step, 0.0};
  const fs::path file = scratch("cache") / "pipm.bin";
  const auto built = cached_abstraction(file, p.grid, spec);
  REQUIRE(fs::exists(file));
  const auto again = cached_abstraction(file, p.grid, spec);
  const ModeAbstraction loaded = load_abstraction(file);
  CHECK(built->boxes() == loaded.boxes());
  CHECK(built->boxes() == again->boxes());
  // A different bound must not reuse the file.
  spec.r.dvx *= 2.0;
  const auto other = cached_abstraction(file, p.grid, spec);
  CHECK(other->spec().r.dvx == spec.r.dvx);
}

TEST_CASE("winning sets shrink as the synthesis bound grows") {
  const Scenario s = load_scenario(resolve_scenario("walk_step"));
  REQUIRE(s.levels.size() >= 3);
  const LevelSweep sweep = sweep_levels(s.ows, s.levels);
  REQUIRE(sweep.runs.size() == s.levels.size());
  CHECK(sweep.nested());
  for (std::size_t i = 1; i < sweep.runs.size(); ++i) {
    CHECK(sweep.runs[i].report.win1 <= sweep.runs[i - 1].report.win1);
    CHECK(sweep.runs[i].report.win2 <= sweep.runs[i - 1].report.win2);
  }
}

TEST_CASE("walking step initial coverage") {
  const OwsRun run = run_ows(walk_step());
  CHECK(run.report.reachable);
  CHECK(run.report.coverage >= 0.9);
}
