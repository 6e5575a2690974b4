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

// Robust synthesis of one walking step: two semi-step abstractions, the
// region where the mode switch is allowed, and the backward reach problems
// chained through it.

#ifndef LTAMP_OWS_SYNTHESIS_HPP_
#define LTAMP_OWS_SYNTHESIS_HPP_

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "ltamp/abstraction.hpp"
#include "ltamp/margin.hpp"
#include "ltamp/phase_plan.hpp"
#include "ltamp/reach_synth.hpp"

namespace ltamp {

struct ControlRange {
  double lo = 2.0;
  double hi = 4.0;
  double step = 0.02;

  std::vector<double> samples() const { return sample_controls(lo, hi, step); }
};

struct OwsProblem {
  Keyframe kf_initial;
  Keyframe kf_final;
  // Nominal templates; omega is the nominal control.
  TemplateParams params1;
  TemplateParams params2;
  ControlRange controls1;
  ControlRange controls2;
  Margin margin_initial;
  Margin margin_final;
  DisturbanceVector r;
  double step = 0.02;
  // Growth-bound constants per semi-step; 0 picks the default.
  double lipschitz1 = 0.0;
  double lipschitz2 = 0.0;
  UniformGrid grid;
  // Positions where the switch may happen; defaults to the nominal switch
  // +- 0.1 m clipped to the contacts.
  std::optional<Interval> switch_x;
  // A cell joins the switch region when its centre lies in it, or, with
  // kTouch, when its box meets both manifold bands.
  enum class SwitchCells { kCenter, kTouch } switch_cells = SwitchCells::kCenter;
  // Multiplies both sigma margins inside the switch region.
  double switch_band = 1.0;
};

// "center" or "touch".
OwsProblem::SwitchCells switch_cells_from_name(std::string_view name);

// Charts, margin sets and switch region of one keyframe-cell pair.
struct OwsGeometry {
  OwsPlan plan;
  MarginSet initial_set;
  MarginSet final_set;
  Interval switch_x;
  double switch_band = 1.0;

  // Both semi-step manifolds within their margins.
  bool in_switch_region(ComState s) const;
  // The box meets the position window and each manifold band.
  bool touches_switch_region(const StateBox& box) const;
  double sigma1(ComState s) const;
  double sigma2(ComState s) const;
};

OwsGeometry ows_geometry(const OwsProblem& problem, RiemCell initial = {},
                         RiemCell final = {});

struct OwsAbstractions {
  std::shared_ptr<const ModeAbstraction> first;
  std::shared_ptr<const ModeAbstraction> second;
};

OwsAbstractions build_ows_abstractions(const OwsProblem& problem);

struct OwsSynthesis {
  OwsGeometry geometry;
  // Cells meeting the initial set, cells inside the final set, and switch
  // cells: second-semi-step winners whose centre lies in the switch region.
  // second.reachable is true iff there is a switch cell.
  CellSet init_cells;
  CellSet goal_cells;
  CellSet switch_cells;
  ReachResult first;
  ReachResult second;

  bool reachable() const { return first.reachable; }
};

// Second-semi-step winning set for one final cell, shareable by every
// initial cell of the same step.
struct OwsSecondStage {
  RiemCell final;
  CellSet goal_cells;
  ReachResult second;
};

OwsSecondStage synthesize_second_stage(const OwsProblem& problem,
                                       const OwsAbstractions& abs,
                                       RiemCell final = {});

OwsSynthesis synthesize_ows(const OwsProblem& problem,
                            const OwsAbstractions& abs, RiemCell initial = {},
                            RiemCell final = {});
OwsSynthesis synthesize_ows(const OwsProblem& problem,
                            const OwsAbstractions& abs, RiemCell initial,
                            const OwsSecondStage& second);

// Fraction of the initial cells inside the first winning set.
double initial_coverage(const OwsSynthesis& s);

// Sub-grid of `full` around the nominal plan, aligned to its cells.
UniformGrid local_grid(const UniformGrid& full, const OwsPlan& plan,
                       double pad_x, double pad_v);

}  // namespace ltamp

#endif  // LTAMP_OWS_SYNTHESIS_HPP_
