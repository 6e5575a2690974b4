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

#include "ltamp/abstraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ltamp/error.hpp"

namespace ltamp {

bool TransitionSystem::successors_within(int q, int a,
                                         const CellSet& set) const {
  std::vector<int> succ;
  successors(q, a, succ);
  if (succ.empty()) return false;
  return std::all_of(succ.begin(), succ.end(),
                     [&](int s) { return set.test(s); });
}

ExplicitTs::ExplicitTs(std::vector<std::vector<std::vector<int>>> succ)
    : succ_(std::move(succ)), pred_(succ_.size()) {
  for (const auto& row : succ_) {
    num_actions_ = std::max(num_actions_, static_cast<int>(row.size()));
  }
  for (auto& row : succ_) row.resize(num_actions_);
  const int n = num_states();
  for (int q = 0; q < n; ++q) {
    for (int a = 0; a < num_actions_; ++a) {
      auto& list = succ_[q][a];
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      for (int s : list) {
        if (s < 0 || s >= n) throw Error(ErrorCode::kIndex, "successor out of range");
        pred_[s].push_back({q, a});
      }
    }
  }
}

void ExplicitTs::successors(int q, int a, std::vector<int>& out) const {
  out = succ_[q][a];
}

void ExplicitTs::predecessors(int target, std::vector<StateAction>& out) const {
  out = pred_[target];
}

ModeAbstraction::ModeAbstraction(const UniformGrid& grid,
                                 ModeAbstractionSpec spec, BoxKernel kernel)
    : grid_(grid), spec_(std::move(spec)) {
  prepare();
  const int n = grid_.num_cells();
  std::vector<double> xs(n), vs(n);
  for (int c = 0; c < n; ++c) {
    const ComState s = grid_.center(c);
    xs[c] = s.x;
    vs[c] = s.vx;
  }
  boxes_.resize(static_cast<std::size_t>(n) * spec_.controls.size());
  for (int a = 0; a < num_actions(); ++a) {
    const AffineAccel acc = affine_accel(control_params(a));
    BoxKernelArgs args;
    args.x = xs.data();
    args.v = vs.data();
    args.n = n;
    args.k = acc.k;
    args.m = acc.m;
    args.h = spec_.step;
    args.infl_x = inflation_[a].x;
    args.infl_v = inflation_[a].vx;
    args.x_min = grid_.x_min;
    args.v_min = grid_.v_min;
    args.eta_x = grid_.eta_x;
    args.eta_v = grid_.eta_v;
    args.nx = grid_.nx;
    args.nv = grid_.nv;
    args.out = boxes_.data() + static_cast<std::size_t>(a) * n;
    kernel(args);
  }
}

ModeAbstraction::ModeAbstraction(const UniformGrid& grid,
                                 ModeAbstractionSpec spec,
                                 std::vector<SuccessorBox> boxes)
    : grid_(grid), spec_(std::move(spec)), boxes_(std::move(boxes)) {
  prepare();
  if (boxes_.size() !=
      static_cast<std::size_t>(grid_.num_cells()) * spec_.controls.size()) {
    throw Error(ErrorCode::kConfiguration, "abstraction box count mismatch");
  }
}

void ModeAbstraction::prepare() {
  if (spec_.controls.empty()) {
    throw Error(ErrorCode::kConfiguration, "empty control sample set");
  }
  if (!(spec_.step > 0.0)) {
    throw Error(ErrorCode::kConfiguration, "time step must be positive");
  }
  if (grid_.nx <= 0 || grid_.nv <= 0 ||
      grid_.nx > std::numeric_limits<std::int16_t>::max() ||
      grid_.nv > std::numeric_limits<std::int16_t>::max()) {
    throw Error(ErrorCode::kConfiguration, "grid size out of range");
  }
  double lipschitz = spec_.lipschitz;
  if (lipschitz <= 0.0) {
    double w_max = 0.0;
    for (double u : spec_.controls) w_max = std::max(w_max, std::abs(u));
    lipschitz = default_lipschitz(spec_.params.mode, w_max);
  }
  gb_ = GrowthBound{lipschitz, spec_.r, spec_.step};
  const Inflation half{0.5 * grid_.eta_x, 0.5 * grid_.eta_v};
  inflation_.clear();
  steps_.clear();
  for (int a = 0; a < num_actions(); ++a) {
    const TemplateParams p = control_params(a);
    inflation_.push_back(gb_.inflate(p, half));
    const ComState t = rk4_step(p, {0.0, 0.0}, spec_.step);
    const ComState e1 = rk4_step(p, {1.0, 0.0}, spec_.step);
    const ComState e2 = rk4_step(p, {0.0, 1.0}, spec_.step);
    steps_.push_back({e1.x - t.x, e2.x - t.x, e1.vx - t.vx, e2.vx - t.vx, t.x,
                      t.vx});
  }
}

TemplateParams ModeAbstraction::control_params(int a) const {
  return spec_.params.with_omega(spec_.controls[a]);
}

ComState ModeAbstraction::nominal_image(int q, int a) const {
  return rk4_step(control_params(a), grid_.center(q), spec_.step);
}

void ModeAbstraction::successors(int q, int a, std::vector<int>& out) const {
  out.clear();
  const SuccessorBox& b = box(q, a);
  if (!b.valid()) return;
  for (int ix = b.x_lo; ix <= b.x_hi; ++ix) {
    for (int iv = b.v_lo; iv <= b.v_hi; ++iv) out.push_back(grid_.index(ix, iv));
  }
}

bool ModeAbstraction::successors_within(int q, int a,
                                        const CellSet& set) const {
  const SuccessorBox& b = box(q, a);
  if (!b.valid()) return false;
  for (int ix = b.x_lo; ix <= b.x_hi; ++ix) {
    const int row = ix * grid_.nv;
    for (int iv = b.v_lo; iv <= b.v_hi; ++iv) {
      if (!set.test(row + iv)) return false;
    }
  }
  return true;
}

void ModeAbstraction::predecessors(int target,
                                   std::vector<StateAction>& out) const {
  out.clear();
  const int jx = grid_.ix_of(target);
  const int jv = grid_.iv_of(target);
  for (int a = 0; a < num_actions(); ++a) {
    const AffineStep& s = steps_[a];
    const Inflation& inf = inflation_[a];
    // Centre images whose reach box can touch the target cell.
    const double xlo = grid_.x_min + jx * grid_.eta_x - inf.x - s.t1;
    const double xhi = grid_.x_min + (jx + 1) * grid_.eta_x + inf.x - s.t1;
    const double vlo = grid_.v_min + jv * grid_.eta_v - inf.vx - s.t2;
    const double vhi = grid_.v_min + (jv + 1) * grid_.eta_v + inf.vx - s.t2;
    const double det = s.a11 * s.a22 - s.a12 * s.a21;
    const double b11 = s.a22 / det, b12 = -s.a12 / det;
    const double b21 = -s.a21 / det, b22 = s.a11 / det;
    double px_lo = std::numeric_limits<double>::infinity(), px_hi = -px_lo;
    double pv_lo = px_lo, pv_hi = px_hi;
    for (double cx : {xlo, xhi}) {
      for (double cv : {vlo, vhi}) {
        const double px = b11 * cx + b12 * cv;
        const double pv = b21 * cx + b22 * cv;
        px_lo = std::min(px_lo, px);
        px_hi = std::max(px_hi, px);
        pv_lo = std::min(pv_lo, pv);
        pv_hi = std::max(pv_hi, pv);
      }
    }
    // One cell of slack absorbs rounding; the stored box decides.
    const int ix0 = std::max(
        0, static_cast<int>(std::floor((px_lo - grid_.x_min) / grid_.eta_x)) - 1);
    const int ix1 = std::min(
        grid_.nx - 1,
        static_cast<int>(std::floor((px_hi - grid_.x_min) / grid_.eta_x)) + 1);
    const int iv0 = std::max(
        0, static_cast<int>(std::floor((pv_lo - grid_.v_min) / grid_.eta_v)) - 1);
    const int iv1 = std::min(
        grid_.nv - 1,
        static_cast<int>(std::floor((pv_hi - grid_.v_min) / grid_.eta_v)) + 1);
    for (int ix = ix0; ix <= ix1; ++ix) {
      for (int iv = iv0; iv <= iv1; ++iv) {
        const int q = grid_.index(ix, iv);
        const SuccessorBox& b = box(q, a);
        if (b.valid() && b.x_lo <= jx && jx <= b.x_hi && b.v_lo <= jv &&
            jv <= b.v_hi) {
          out.push_back({q, a});
        }
      }
    }
  }
}

StateBox reach_over_approx(const StateBox& cell, const TemplateParams& params,
                           const GrowthBound& gb) {
  const ComState c{0.5 * (cell.x.lo + cell.x.hi), 0.5 * (cell.vx.lo + cell.vx.hi)};
  const Inflation half{0.5 * (cell.x.hi - cell.x.lo),
                       0.5 * (cell.vx.hi - cell.vx.lo)};
  const ComState img = rk4_step(params, c, gb.h);
  const Inflation inf = gb.inflate(params, half);
  return {{img.x - inf.x, img.x + inf.x}, {img.vx - inf.vx, img.vx + inf.vx}};
}

}  // namespace ltamp
