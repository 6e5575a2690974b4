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

// Finite transition systems over cells and controls. ModeAbstraction is the
// grid abstraction of one template with sampled controls, disturbance-
// inflated one-step images and self-transitions kept.

#ifndef LTAMP_ABSTRACTION_HPP_
#define LTAMP_ABSTRACTION_HPP_

#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "ltamp/grid.hpp"
#include "ltamp/kernels.hpp"
#include "ltamp/templates.hpp"

namespace ltamp {

using CellSet = boost::dynamic_bitset<>;

struct StateAction {
  int state = 0;
  int action = 0;
};

class TransitionSystem {
 public:
  virtual ~TransitionSystem() = default;

  virtual int num_states() const = 0;
  virtual int num_actions() const = 0;
  // An action is enabled when it has at least one successor.
  virtual bool enabled(int q, int a) const = 0;
  virtual void successors(int q, int a, std::vector<int>& out) const = 0;
  virtual bool successors_within(int q, int a, const CellSet& set) const;
  // Every (q, a) that can reach `target`.
  virtual void predecessors(int target, std::vector<StateAction>& out) const = 0;
};

// Small transition systems given as explicit successor lists; an empty list
// disables the action.
class ExplicitTs final : public TransitionSystem {
 public:
  // succ[q][a] lists the successors of (q, a).
  explicit ExplicitTs(std::vector<std::vector<std::vector<int>>> succ);

  int num_states() const override { return static_cast<int>(succ_.size()); }
  int num_actions() const override { return num_actions_; }
  bool enabled(int q, int a) const override { return !succ_[q][a].empty(); }
  void successors(int q, int a, std::vector<int>& out) const override;
  void predecessors(int target, std::vector<StateAction>& out) const override;

 private:
  std::vector<std::vector<std::vector<int>>> succ_;
  std::vector<std::vector<StateAction>> pred_;
  int num_actions_ = 0;
};

struct ModeAbstractionSpec {
  // Mode and contact; omega is replaced by each sampled control.
  TemplateParams params;
  std::vector<double> controls;
  // Disturbance bound per state dimension.
  DisturbanceVector r;
  double step = 0.02;
  // 0 selects default_lipschitz for the largest control.
  double lipschitz = 0.0;
};

class ModeAbstraction final : public TransitionSystem {
 public:
  ModeAbstraction(const UniformGrid& grid, ModeAbstractionSpec spec,
                  BoxKernel kernel = select_box_kernel());
  // Restores precomputed boxes, laid out control-major.
  ModeAbstraction(const UniformGrid& grid, ModeAbstractionSpec spec,
                  std::vector<SuccessorBox> boxes);

  int num_states() const override { return grid_.num_cells(); }
  int num_actions() const override { return static_cast<int>(spec_.controls.size()); }
  bool enabled(int q, int a) const override { return box(q, a).valid(); }
  void successors(int q, int a, std::vector<int>& out) const override;
  bool successors_within(int q, int a, const CellSet& set) const override;
  void predecessors(int target, std::vector<StateAction>& out) const override;

  const SuccessorBox& box(int q, int a) const {
    return boxes_[static_cast<std::size_t>(a) * grid_.num_cells() + q];
  }
  const std::vector<SuccessorBox>& boxes() const { return boxes_; }
  const UniformGrid& grid() const { return grid_; }
  const ModeAbstractionSpec& spec() const { return spec_; }
  TemplateParams control_params(int a) const;
  GrowthBound growth_bound() const { return gb_; }
  Inflation inflation(int a) const { return inflation_[a]; }
  // Nominal one-step image of the centre of `q` under action `a`.
  ComState nominal_image(int q, int a) const;

 private:
  // One RK4 step of an affine template is affine: s' = A s + t.
  struct AffineStep {
    double a11, a12, a21, a22, t1, t2;
  };

  void prepare();

  UniformGrid grid_;
  ModeAbstractionSpec spec_;
  GrowthBound gb_;
  std::vector<Inflation> inflation_;
  std::vector<AffineStep> steps_;
  std::vector<SuccessorBox> boxes_;
};

// Reach box of a cell under a control: nominal image of the centre plus the
// growth-bound inflation of the half-widths.
StateBox reach_over_approx(const StateBox& cell, const TemplateParams& params,
                           const GrowthBound& gb);

}  // namespace ltamp

#endif  // LTAMP_ABSTRACTION_HPP_
