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

#include "ltamp/ows_synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "ltamp/error.hpp"

namespace ltamp {
namespace {

CellSet cells_where(const UniformGrid& grid, auto&& pred) {
  CellSet out(grid.num_cells());
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (pred(c)) out.set(c);
  }
  return out;
}

// Chart ranges throw where a coordinate is undefined; such cells take no
// part in either set.
template <typename F>
bool safe(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return false;
  }
}

ControlScore sigma_score(const ModeAbstraction& abs, const MarginSet& set) {
  const double target = set.center().sigma;
  return [&abs, &set, target](int q, int a) {
    const ComState img = abs.nominal_image(q, a);
    return std::abs(tangent_sigma(set.params(), img, set.keyframe()) - target);
  };
}

}  // namespace

double OwsGeometry::sigma1(ComState s) const {
  return tangent_sigma(initial_set.params(), s, initial_set.keyframe());
}

double OwsGeometry::sigma2(ComState s) const {
  return tangent_sigma(final_set.params(), s, final_set.keyframe());
}

bool OwsGeometry::in_switch_region(ComState s) const {
  return switch_x.contains(s.x) &&
         std::abs(sigma1(s) - initial_set.center().sigma) <=
             switch_band * initial_set.margin.d_sigma &&
         std::abs(sigma2(s) - final_set.center().sigma) <=
             switch_band * final_set.margin.d_sigma;
}

bool OwsGeometry::touches_switch_region(const StateBox& box) const {
  if (!box.x.intersects(switch_x)) return false;
  const double c1 = initial_set.center().sigma;
  const double c2 = final_set.center().sigma;
  const Interval s1 = initial_set.chart.range(box).sigma;
  const Interval s2 = final_set.chart.range(box).sigma;
  const double b1 = switch_band * initial_set.margin.d_sigma;
  const double b2 = switch_band * final_set.margin.d_sigma;
  return s1.intersects({c1 - b1, c1 + b1}) && s2.intersects({c2 - b2, c2 + b2});
}

OwsProblem::SwitchCells switch_cells_from_name(std::string_view name) {
  if (name == "center") return OwsProblem::SwitchCells::kCenter;
  if (name == "touch") return OwsProblem::SwitchCells::kTouch;
  throw Error(ErrorCode::kConfiguration, "unknown switch cell rule " + std::string(name));
}

OwsGeometry ows_geometry(const OwsProblem& p, RiemCell initial,
                         RiemCell final) {
  OwsGeometry g{plan_ows(p.kf_initial, p.kf_final, p.params1, p.params2),
                {}, {}, {}, p.switch_band};
  const MarginSet base1 =
      make_margin_set(make_chart(p.params1, p.kf_initial), p.margin_initial);
  const MarginSet base2 = make_margin_set(
      make_chart(p.params2, p.kf_final, g.plan.switch_state), p.margin_final);
  g.initial_set = cell_margin_set(base1, grid_from_margin(p.margin_initial), initial);
  g.final_set = cell_margin_set(base2, grid_from_margin(p.margin_final), final);
  if (p.switch_x) {
    g.switch_x = *p.switch_x;
  } else {
    const double xs = g.plan.switch_state.x;
    g.switch_x = {std::max(p.kf_initial.contact_x, xs - 0.1),
                  std::min(p.kf_final.contact_x, xs + 0.1)};
  }
  return g;
}

OwsAbstractions build_ows_abstractions(const OwsProblem& p) {
  auto spec = [&](const TemplateParams& params, const ControlRange& u,
                  double lipschitz) {
    ModeAbstractionSpec s;
    s.lipschitz = lipschitz;
    s.params = params;
    s.controls = params.mode == ModeKind::kHm ? std::vector<double>{0.0} : u.samples();
    s.r = p.r;
    s.step = p.step;
    return s;
  };
  return {std::make_shared<const ModeAbstraction>(p.grid, spec(p.params1, p.controls1, p.lipschitz1)),
          std::make_shared<const ModeAbstraction>(p.grid, spec(p.params2, p.controls2, p.lipschitz2))};
}

namespace {

void check_grids(const OwsProblem& p, const OwsAbstractions& abs) {
  if (!(abs.first->grid() == p.grid) || !(abs.second->grid() == p.grid)) {
    throw Error(ErrorCode::kConfiguration, "abstraction grid does not match");
  }
}

void empty_result(ReachResult& r, int n) {
  r.reachable = false;
  r.win = CellSet(n);
  r.policy.order.assign(n, -1);
  r.policy.chosen.assign(n, -1);
}

}  // namespace

OwsSecondStage synthesize_second_stage(const OwsProblem& p,
                                       const OwsAbstractions& abs,
                                       RiemCell final) {
  check_grids(p, abs);
  const OwsGeometry geo = ows_geometry(p, {}, final);
  const UniformGrid& grid = p.grid;
  OwsSecondStage out{final, {}, {}};
  out.goal_cells = cells_where(grid, [&](int c) {
    return safe([&] { return box_inside(geo.final_set, grid.cell_box(c)); });
  });
  if (out.goal_cells.none()) {
    empty_result(out.second, grid.num_cells());
    return out;
  }
  out.second = reachability_control(*abs.second, CellSet(grid.num_cells()),
                                    out.goal_cells);
  choose_controls(out.second, sigma_score(*abs.second, geo.final_set));
  return out;
}

OwsSynthesis synthesize_ows(const OwsProblem& p, const OwsAbstractions& abs,
                            RiemCell initial, RiemCell final) {
  return synthesize_ows(p, abs, initial, synthesize_second_stage(p, abs, final));
}

OwsSynthesis synthesize_ows(const OwsProblem& p, const OwsAbstractions& abs,
                            RiemCell initial, const OwsSecondStage& stage) {
  check_grids(p, abs);
  OwsSynthesis out{ows_geometry(p, initial, stage.final), {}, stage.goal_cells,
                   {}, {}, stage.second};
  const UniformGrid& grid = p.grid;
  const OwsGeometry& geo = out.geometry;
  out.init_cells = cells_where(grid, [&](int c) {
    return safe([&] { return box_intersects(geo.initial_set, grid.cell_box(c)); });
  });
  // The switch region depends on the initial cell through the first
  // manifold's margin.
  const CellSet region = cells_where(grid, [&](int c) {
    if (!out.second.win.test(c)) return false;
    if (p.switch_cells == OwsProblem::SwitchCells::kTouch) {
      return safe([&] { return geo.touches_switch_region(grid.cell_box(c)); });
    }
    return safe([&] { return geo.in_switch_region(grid.center(c)); });
  });
  out.switch_cells = region;
  out.second.reachable = region.any();
  if (region.none()) {
    empty_result(out.first, grid.num_cells());
    return out;
  }
  out.first = reachability_control(*abs.first, out.init_cells, out.switch_cells);
  choose_controls(out.first, sigma_score(*abs.first, geo.initial_set));
  return out;
}

double initial_coverage(const OwsSynthesis& s) {
  const auto n = s.init_cells.count();
  if (n == 0) return 0.0;
  return static_cast<double>((s.init_cells & s.first.win).count()) /
         static_cast<double>(n);
}

UniformGrid local_grid(const UniformGrid& full, const OwsPlan& plan,
                       double pad_x, double pad_v) {
  const std::vector<ComState> path = nominal_polyline(plan);
  double x_lo = std::min(plan.kf_initial.contact_x, plan.kf_final.contact_x);
  double x_hi = std::max(plan.kf_initial.contact_x, plan.kf_final.contact_x);
  double v_lo = std::min(plan.kf_initial.apex_vx, plan.kf_final.apex_vx);
  double v_hi = std::max(plan.kf_initial.apex_vx, plan.kf_final.apex_vx);
  for (const ComState& s : path) {
    x_lo = std::min(x_lo, s.x);
    x_hi = std::max(x_hi, s.x);
    v_lo = std::min(v_lo, s.vx);
    v_hi = std::max(v_hi, s.vx);
  }
  const int ix0 = std::max(0, static_cast<int>(std::floor((x_lo - pad_x - full.x_min) / full.eta_x)));
  const int ix1 = std::min(full.nx, static_cast<int>(std::ceil((x_hi + pad_x - full.x_min) / full.eta_x)));
  const int iv0 = std::max(0, static_cast<int>(std::floor((v_lo - pad_v - full.v_min) / full.eta_v)));
  const int iv1 = std::min(full.nv, static_cast<int>(std::ceil((v_hi + pad_v - full.v_min) / full.eta_v)));
  if (ix1 <= ix0 || iv1 <= iv0) {
    throw Error(ErrorCode::kConfiguration, "local grid is empty");
  }
  UniformGrid g = full;
  g.x_min = full.x_min + ix0 * full.eta_x;
  g.v_min = full.v_min + iv0 * full.eta_v;
  g.nx = ix1 - ix0;
  g.nv = iv1 - iv0;
  return g;
}

}  // namespace ltamp
