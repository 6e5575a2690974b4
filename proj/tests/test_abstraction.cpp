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
#include <cstring>
#include <random>
#include <set>
#include <utility>

#include <doctest.h>

#include "ltamp/abstraction.hpp"
#include "ltamp/error.hpp"
#include "ltamp/grid.hpp"
#include "ltamp/kernels.hpp"

using namespace ltamp;

namespace {

UniformGrid walk_step_grid() {
  return UniformGrid::covering({{-0.1, 0.7}, {0.1, 1.2}}, 0.005, 0.005);
}

ModeAbstractionSpec walk_step_spec(double contact) {
  return {{ModeKind::kPipm, 3.0, contact}, sample_controls(2.0, 4.0, 0.02),
          {0.05, 0.1}, 0.02, 0.0};
}

}  // namespace

TEST_CASE("grid indexing") {
  const UniformGrid g = walk_step_grid();
  CHECK(g.nx == 160);
  CHECK(g.nv == 220);
  for (int c = 0; c < g.num_cells(); ++c) REQUIRE(g.cell_of(g.center(c)) == c);
  CHECK(g.cell_of({0.7, 1.2}) == g.num_cells() - 1);
  CHECK(g.cell_of({-0.1, 0.1}) == 0);
  CHECK(g.cell_of({0.7000001, 0.5}) == -1);
  CHECK(g.cell_of({-0.1000001, 0.5}) == -1);
  CHECK(g.cell_of({0.0, 1.3}) == -1);
  // ix * nv + iv
  CHECK(g.cell_of({-0.1 + 2.5 * 0.005, 0.1 + 7.5 * 0.005}) == 2 * 220 + 7);
}

TEST_CASE("control samples") {
  const auto u = sample_controls(2.0, 4.0, 0.02);
  CHECK(u.size() == 101);
  CHECK(u.front() == 2.0);
  CHECK(u.back() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(sample_controls(1.0, 1.0, 0.5).size() == 1);
  CHECK_THROWS_AS(sample_controls(1.0, 2.0, 0.0), Error);
  CHECK_THROWS_AS(sample_controls(2.0, 1.0, 0.1), Error);
}

TEST_CASE("growth bound values") {
  // (e^0.32 - 1) / 16 * (0.05, 0.1)
  const Inflation i = growth_inflation(16.0, {0.0, 0.0}, {0.05, 0.1}, 0.02);
  CHECK(i.x == doctest::Approx(1.1785e-3).epsilon(1e-4));
  CHECK(i.vx == doctest::Approx(2.3571e-3).epsilon(1e-4));
  const double e = 1.0 + 0.32 + 0.32 * 0.32 / 2 + std::pow(0.32, 3) / 6 +
                   std::pow(0.32, 4) / 24 + std::pow(0.32, 5) / 120 +
                   std::pow(0.32, 6) / 720 + std::pow(0.32, 7) / 5040;
  CHECK(i.x == doctest::Approx((e - 1.0) / 16.0 * 0.05).epsilon(1e-7));
  const Inflation d = growth_inflation(16.0, {0.0025, 0.0025}, {}, 0.02);
  CHECK(d.x == doctest::Approx(0.0025 * e).epsilon(1e-7));
  CHECK(d.vx == d.x);
}

TEST_CASE("growth bound monotone in r, L and h") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const Inflation dev{u(rng) * 0.01, u(rng) * 0.01};
    const DisturbanceVector r{u(rng) * 0.2, u(rng) * 0.3};
    const DisturbanceVector r2{r.dx + u(rng) * 0.1, r.dvx + u(rng) * 0.1};
    const double L = 1.0 + u(rng) * 20.0;
    const double L2 = L + u(rng) * 5.0;
    const double h = 0.001 + u(rng) * 0.05;
    const double h2 = h + u(rng) * 0.02;
    const Inflation base = growth_inflation(L, dev, r, h);
    for (const Inflation& bigger :
         {growth_inflation(L, dev, r2, h), growth_inflation(L2, dev, r, h),
          growth_inflation(L, dev, r, h2)}) {
      CHECK(bigger.x >= base.x);
      CHECK(bigger.vx >= base.vx);
    }
    const double k = u(rng) * 16.0;
    const Inflation mb = metzler_inflation(k, dev, r, h);
    const Inflation mr = metzler_inflation(k, dev, r2, h);
    const Inflation mh = metzler_inflation(k, dev, r, h2);
    const Inflation mk = metzler_inflation(k + 1.0, dev, r, h);
    for (const Inflation& bigger : {mr, mh, mk}) {
      CHECK(bigger.x >= mb.x);
      CHECK(bigger.vx >= mb.vx);
    }
  }
}

TEST_CASE("metzler bound holds for elongated cells") {
  // A wide velocity extent moves the position further than dev_x e^{Lh}.
  const TemplateParams p{ModeKind::kHm, 0.0, 0.0};
  const GrowthBound gb{1.0, {}, 0.1};
  const StateBox cell{{0.0, 0.002}, {0.4, 0.6}};
  const StateBox box = reach_over_approx(cell, p, gb);
  for (double x : {0.0, 0.002}) {
    for (double v : {0.4, 0.6}) {
      const ComState s = rk4_step(p, {x, v}, 0.1);
      CHECK(s.x >= box.x.lo - 1e-12);
      CHECK(s.x <= box.x.hi + 1e-12);
      CHECK(box.vx.contains(s.vx));
    }
  }
  CHECK(growth_inflation(1.0, {0.001, 0.1}, {}, 0.1).x < 0.011);
}

TEST_CASE("reach over-approximation examples") {
  const GrowthBound zero{16.0, {}, 0.02};
  const TemplateParams pipm{ModeKind::kPipm, 3.0, 0.0};
  const StateBox point{{0.1, 0.1}, {0.6, 0.6}};
  const StateBox b = reach_over_approx(point, pipm, zero);
  const ComState img = rk4_step(pipm, {0.1, 0.6}, 0.02);
  CHECK(b.x.lo == img.x);
  CHECK(b.x.hi == img.x);
  CHECK(b.vx.lo == img.vx);
  CHECK(b.vx.hi == img.vx);

  const StateBox c = reach_over_approx({{0.0, 0.0}, {0.5, 0.5}}, pipm, zero);
  const ComState ci{c.x.lo, c.vx.lo};
  CHECK(std::abs(tangent_sigma(pipm, ci, {0.0, 0.5})) < 1e-6);
}

TEST_CASE("scalar and avx2 kernels agree bit for bit") {
  if (!avx2_available()) {
    MESSAGE("no AVX2 on this host");
    return;
  }
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(u(rng) * 257);
    std::vector<double> xs(n), vs(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = -0.3 + 1.2 * u(rng);
      vs[i] = -0.1 + 1.6 * u(rng);
    }
    if (t % 10 == 0) xs[0] = std::nan("");
    BoxKernelArgs args;
    args.x = xs.data();
    args.v = vs.data();
    args.n = n;
    args.k = (u(rng) - 0.5) * 32.0;
    args.m = (u(rng) - 0.5) * 8.0;
    args.h = 0.002 + 0.05 * u(rng);
    args.infl_x = 0.01 * u(rng);
    args.infl_v = 0.01 * u(rng);
    args.x_min = -0.1;
    args.v_min = 0.1;
    args.eta_x = 0.003 + 0.004 * u(rng);
    args.eta_v = 0.003 + 0.004 * u(rng);
    args.nx = 1 + static_cast<int>(u(rng) * 300);
    args.nv = 1 + static_cast<int>(u(rng) * 300);
    std::vector<SuccessorBox> b1(n), b2(n);
    std::vector<double> x1(n), v1(n), x2(n), v2(n);
    args.out = b1.data();
    args.img_x = x1.data();
    args.img_v = v1.data();
    successor_boxes_scalar(args);
    args.out = b2.data();
    args.img_x = x2.data();
    args.img_v = v2.data();
    successor_boxes_avx2(args);
    REQUIRE(b1 == b2);
    CHECK(std::memcmp(x1.data(), x2.data(), n * sizeof(double)) == 0);
    CHECK(std::memcmp(v1.data(), v2.data(), n * sizeof(double)) == 0);
  }
}

TEST_CASE("abstraction built by either kernel is identical") {
  const UniformGrid g = walk_step_grid();
  const ModeAbstraction a(g, walk_step_spec(0.0), successor_boxes_scalar);
  const ModeAbstraction b(g, walk_step_spec(0.0), select_box_kernel());
  CHECK(a.boxes() == b.boxes());
}

TEST_CASE("walking step abstraction size") {
  const ModeAbstraction abs(walk_step_grid(), walk_step_spec(0.0));
  CHECK(abs.num_states() == 160 * 220);
  CHECK(abs.num_actions() == 101);
  CHECK(abs.growth_bound().lipschitz == 16.0);
  int enabled = 0;
  for (int q = 0; q < abs.num_states(); ++q) enabled += abs.enabled(q, 50);
  CHECK(enabled > abs.num_states() / 2);
}

TEST_CASE("empty control set is a configuration error") {
  ModeAbstractionSpec spec = walk_step_spec(0.0);
  spec.controls.clear();
  CHECK_THROWS_AS(ModeAbstraction(walk_step_grid(), spec), Error);
}

TEST_CASE("single-cell grid with a stationary flow self-loops") {
  const UniformGrid g = UniformGrid::covering({{0.0, 1.0}, {-0.5, 0.5}}, 1.0, 1.0);
  REQUIRE(g.num_cells() == 1);
  // A vanishing step keeps e^{Lh} == 1, so the reach box is the cell.
  const ModeAbstraction abs(g, {{ModeKind::kHm, 0.0, 0.0}, {0.0}, {}, 1e-20, 0.0});
  std::vector<int> succ;
  abs.successors(0, 0, succ);
  CHECK(succ == std::vector<int>{0});
}

TEST_CASE("doubling the disturbance only adds successors") {
  const UniformGrid g = UniformGrid::covering({{-0.05, 0.05}, {0.4, 0.5}}, 0.005, 0.005);
  REQUIRE(g.num_cells() == 400);
  ModeAbstractionSpec spec{{ModeKind::kPipm, 3.0, 0.0}, sample_controls(2.0, 4.0, 0.5),
                           {0.05, 0.1}, 0.02, 0.0};
  const ModeAbstraction small(g, spec);
  spec.r = {0.1, 0.2};
  const ModeAbstraction large(g, spec);
  std::vector<int> s1, s2;
  int strict = 0;
  for (int q = 0; q < g.num_cells(); ++q) {
    for (int a = 0; a < small.num_actions(); ++a) {
      small.successors(q, a, s1);
      large.successors(q, a, s2);
      // A box leaving the grid disables the action; otherwise supersets.
      if (!large.enabled(q, a)) continue;
      REQUIRE(small.enabled(q, a));
      const std::set<int> big(s2.begin(), s2.end());
      for (int s : s1) CHECK(big.count(s) == 1);
      strict += s2.size() > s1.size();
    }
  }
  CHECK(strict > 0);
}

TEST_CASE("predecessors match an exhaustive scan") {
  const UniformGrid g = UniformGrid::covering({{-0.05, 0.1}, {0.3, 0.7}}, 0.01, 0.01);
  for (ModeKind mode : {ModeKind::kPipm, ModeKind::kPpm, ModeKind::kMcm, ModeKind::kHm}) {
    ModeAbstractionSpec spec{{mode, 3.0, 0.02}, sample_controls(2.0, 4.0, 0.25),
                             {0.05, 0.1}, 0.02, 0.0};
    if (mode == ModeKind::kHm) spec.controls = {0.0};
    if (mode == ModeKind::kMcm) spec.controls = sample_controls(-1.0, 1.0, 0.5);
    const ModeAbstraction abs(g, spec);
    std::vector<std::set<std::pair<int, int>>> expect(g.num_cells());
    std::vector<int> succ;
    for (int q = 0; q < g.num_cells(); ++q) {
      for (int a = 0; a < abs.num_actions(); ++a) {
        abs.successors(q, a, succ);
        for (int s : succ) expect[s].insert({q, a});
      }
    }
    std::vector<StateAction> got;
    int total = 0;
    for (int t = 0; t < g.num_cells(); ++t) {
      abs.predecessors(t, got);
      std::set<std::pair<int, int>> have;
      for (const StateAction& qa : got) have.insert({qa.state, qa.action});
      REQUIRE(have.size() == got.size());
      CHECK(have == expect[t]);
      total += static_cast<int>(have.size());
    }
    CHECK(total > 0);
  }
}

TEST_CASE("abstraction soundness over 10000 samples") {
  struct Setup {
    UniformGrid grid;
    ModeAbstractionSpec spec;
  };
  const std::vector<Setup> setups = {
      {walk_step_grid(), walk_step_spec(0.0)},
      {walk_step_grid(), walk_step_spec(0.5)},
      {UniformGrid::covering({{-0.1, 0.7}, {0.1, 1.8}}, 0.005, 0.005),
       {{ModeKind::kPpm, 3.0, 0.6}, sample_controls(2.0, 4.0, 0.02), {0.15, 0.3}, 0.02, 0.0}},
      {UniformGrid::covering({{1.5, 2.3}, {0.5, 1.8}}, 0.003, 0.003),
       {{ModeKind::kMcm, 2.0, 2.0}, sample_controls(1.0, 3.0, 0.02), {0.05, 0.1}, 0.02, 0.0}},
      {UniformGrid::covering({{0.4, 1.2}, {0.5, 1.0}}, 0.004, 0.004),
       {{ModeKind::kHm, 0.0, 0.0}, {0.0}, {0.05, 0.1}, 0.02, 0.0}},
  };
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  int escapes = 0;
  for (const Setup& s : setups) {
    const ModeAbstraction abs(s.grid, s.spec);
    int done = 0;
    while (done < 2000) {
      const int q = static_cast<int>(u(rng) * abs.num_states());
      const int a = static_cast<int>(u(rng) * abs.num_actions());
      if (!abs.enabled(q, a)) continue;
      const StateBox cell = s.grid.cell_box(q);
      const ComState x0{cell.x.lo + u(rng) * s.grid.eta_x,
                        cell.vx.lo + u(rng) * s.grid.eta_v};
      const DisturbanceVector d{(2.0 * u(rng) - 1.0) * s.spec.r.dx,
                                (2.0 * u(rng) - 1.0) * s.spec.r.dvx};
      const ComState x1 = rk4_step(abs.control_params(a), x0, s.spec.step, d);
      const int c = s.grid.cell_of(x1);
      const SuccessorBox& b = abs.box(q, a);
      const bool inside = c >= 0 && b.x_lo <= s.grid.ix_of(c) &&
                          s.grid.ix_of(c) <= b.x_hi && b.v_lo <= s.grid.iv_of(c) &&
                          s.grid.iv_of(c) <= b.v_hi;
      escapes += !inside;
      ++done;
    }
    checked += done;
  }
  CHECK(checked == 10000);
  CHECK(escapes == 0);
}
