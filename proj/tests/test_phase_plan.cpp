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
#include <random>

#include <doctest.h>

#include "ltamp/error.hpp"
#include "ltamp/phase_plan.hpp"

using namespace ltamp;

namespace {

TemplateParams pipm(double w, double c) { return {ModeKind::kPipm, w, c}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("pipm to pipm switch") {
  const Keyframe k1{0.0, 0.5};
  const Keyframe k2{0.5, 0.6};
  const ComState s = contact_switch(pipm(3, 0), k1, pipm(3, 0.5), k2);
  // x = 0.25 + 0.11 / 9, vx^2 = 0.25 + 9 x^2
  CHECK(s.x == doctest::Approx(0.26222).epsilon(2e-5));
  CHECK(s.vx == doctest::Approx(0.93212).epsilon(2e-5));
  CHECK(std::abs(tangent_sigma(pipm(3, 0), s, k1)) < 1e-8);
  CHECK(std::abs(tangent_sigma(pipm(3, 0.5), s, k2)) < 1e-8);

  const ComState mid = contact_switch(pipm(3, 0), {0.0, 0.5}, pipm(3, 0.4), {0.4, 0.5});
  CHECK(mid.x == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("switch feasibility") {
  CHECK(code_of([] {
          contact_switch(pipm(3, 0), {0.0, 0.5}, pipm(3, 0.5), {0.5, 2.0});
        }) == ErrorCode::kInfeasibleStep);
  CHECK(code_of([] {
          contact_switch(pipm(3, 0), {0.0, 0.5}, pipm(3, 0.0), {0.0, 0.6});
        }) == ErrorCode::kDegeneratePlan);
  CHECK(code_of([] {
          contact_switch(pipm(3, 0), {0.5, 0.5}, pipm(3, 0.0), {0.0, 0.6});
        }) == ErrorCode::kInfeasibleStep);
  // 9 x^2 + 0.25 = 9 (x - 0.05)^2 + 0.5001^2
  const ComState s = contact_switch(pipm(3, 0), {0.0, 0.5}, pipm(3, 0.05), {0.05, 0.5001});
  CHECK(s.x == doctest::Approx(0.025 + (0.5001 * 0.5001 - 0.25) / 0.9).epsilon(1e-9));
}

TEST_CASE("closed form and root finding agree") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const double w1 = 2.0 + 2.0 * u(rng);
    const double w2 = u(rng) < 0.3 ? w1 : 2.0 + 2.0 * u(rng);
    const Keyframe k1{u(rng), 0.3 + u(rng)};
    const Keyframe k2{k1.contact_x + 0.3 + 0.5 * u(rng), 0.3 + u(rng)};
    ComState a{};
    try {
      a = contact_switch(pipm(w1, k1.contact_x), k1, pipm(w2, k2.contact_x), k2,
                         SwitchMethod::kClosedForm);
    } catch (const Error&) {
      CHECK_THROWS_AS(contact_switch(pipm(w1, k1.contact_x), k1,
                                     pipm(w2, k2.contact_x), k2,
                                     SwitchMethod::kRootFinding),
                      Error);
      continue;
    }
    const ComState b = contact_switch(pipm(w1, k1.contact_x), k1,
                                      pipm(w2, k2.contact_x), k2,
                                      SwitchMethod::kRootFinding);
    CHECK(std::abs(a.x - b.x) < 1e-9);
    CHECK(std::abs(a.vx - b.vx) < 1e-9);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("mixed-mode switches lie on both manifolds") {
  struct Case {
    TemplateParams p1;
    Keyframe k1;
    TemplateParams p2;
    Keyframe k2;
  };
  const Case cases[] = {
      {pipm(3, 0.5), {0.5, 0.6}, {ModeKind::kPpm, 3.0, 1.0}, {1.0, 1.29}},
      {{ModeKind::kPpm, 3.0, 1.0}, {1.0, 1.29}, pipm(3, 1.5), {1.5, 0.6}},
      {pipm(3, 1.5), {1.5, 0.6}, {ModeKind::kMcm, 2.0, 2.0}, {2.0, 1.432}},
      {{ModeKind::kMcm, 2.0, 2.0}, {2.0, 1.432}, pipm(3, 2.6), {2.6, 1.0}},
      {pipm(3, 0.0), {0.0, 0.5}, {ModeKind::kSlm, -1.0, 0.6}, {0.6, 0.0}},
  };
  for (const Case& c : cases) {
    const ComState s = contact_switch(c.p1, c.k1, c.p2, c.k2);
    CHECK(s.x > c.k1.contact_x);
    CHECK(s.x < c.k2.contact_x);
    CHECK(std::abs(tangent_sigma(c.p1, s, c.k1)) < 1e-8);
    CHECK(std::abs(tangent_sigma(c.p2, s, c.k2)) < 1e-8);
  }
}

TEST_CASE("plan integrates onto the switch and the final keyframe") {
  const Keyframe k1{0.0, 0.5};
  const Keyframe k2{0.5, 0.6};
  const OwsPlan plan = plan_ows(k1, k2, pipm(3, 0), pipm(3, 0.5));
  CHECK(plan.switch_state.x == doctest::Approx(0.26222).epsilon(2e-5));
  const ComState a = integrate(plan.params1, k1.state(), plan.zeta_switch, 1e-3);
  CHECK(std::abs(a.x - plan.switch_state.x) < 1e-4);
  CHECK(std::abs(a.vx - plan.switch_state.vx) < 1e-4);
  const ComState b = integrate(plan.params2, a, plan.zeta_final, 1e-3);
  CHECK(std::abs(b.x - k2.contact_x) < 1e-4);
  CHECK(std::abs(b.vx - k2.apex_vx) < 1e-4);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Keyframe p{u(rng), 0.4 + 0.5 * u(rng)};
    const Keyframe q{p.contact_x + 0.4 + 0.3 * u(rng), 0.4 + 0.5 * u(rng)};
    const OwsPlan pl = plan_ows(p, q, pipm(3, p.contact_x), pipm(3, q.contact_x));
    const ComState s1 = integrate(pl.params1, p.state(), pl.zeta_switch, 1e-3);
    CHECK(std::abs(s1.x - pl.switch_state.x) < 1e-4);
    CHECK(std::abs(s1.vx - pl.switch_state.vx) < 1e-4);
    const ComState s2 = integrate(pl.params2, s1, pl.zeta_final, 1e-3);
    CHECK(std::abs(s2.x - q.contact_x) < 1e-4);
    CHECK(std::abs(s2.vx - q.apex_vx) < 1e-4);
  }
}

TEST_CASE("degenerate and ballistic plans") {
  CHECK(code_of([] {
          plan_ows({0.0, 0.5}, {0.0, 0.5}, pipm(3, 0), pipm(3, 0));
        }) == ErrorCode::kDegeneratePlan);
  const TemplateParams hm{ModeKind::kHm, 0.0, 0.0};
  const OwsPlan plan = plan_ows({0.2, 0.8}, {0.7, 0.8}, hm, hm);
  CHECK(plan.switch_state.x == doctest::Approx(0.45));
  CHECK(plan.zeta_switch == doctest::Approx(0.5 / (2 * 0.8)).epsilon(1e-5));
  const std::vector<ComState> line = nominal_polyline(plan);
  CHECK(line.front().x == doctest::Approx(0.2));
  CHECK(line.back().x == doctest::Approx(0.7).epsilon(1e-5));
}

TEST_CASE("level table lookup") {
  const LevelTable table;
  const Keyframe a = level_to_keyframe({Behavior::kWalk, Level::kL, Level::kL}, table, 1.0);
  CHECK(a.contact_x == doctest::Approx(1.7));
  CHECK(a.apex_vx == doctest::Approx(0.8));
  // Velocity S is 0.4 m/s, step M is 0.6 m.
  const Keyframe b = level_to_keyframe({Behavior::kWalk, Level::kS, Level::kM}, table, 0.0);
  CHECK(b.contact_x == doctest::Approx(0.6));
  CHECK(b.apex_vx == doctest::Approx(0.4));
  for (Level l : {Level::kS, Level::kM, Level::kL}) {
    CHECK(level_to_keyframe({Behavior::kStop, l, Level::kS}, table, 0.0).apex_vx == 0.0);
  }
  LevelTable short_table;
  short_table.step_values = {0.15, 0.5};
  CHECK(code_of([&] {
          level_to_keyframe({Behavior::kWalk, Level::kL, Level::kL}, short_table, 0.0);
        }) == ErrorCode::kIndex);
}

TEST_CASE("keyframe indexing") {
  for (int i = 0; i < kNumKeyframeIds; ++i) {
    CHECK(keyframe_index(keyframe_level(i)) == i);
    CHECK(keyframe_from_name(keyframe_name(i)) == i);
  }
  CHECK(keyframe_name(0) == "walk-s-s");
  CHECK(keyframe_name(1) == "walk-s-m");
  CHECK(keyframe_name(9) == "brachiation-s-s");
  CHECK(keyframe_name(18) == "stop-s");
  CHECK(keyframe_name(26) == "slide-l");
}
