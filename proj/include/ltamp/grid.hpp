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

// Uniform phase-space grid, sampled controls and the growth bound used to
// inflate one-step images.

#ifndef LTAMP_GRID_HPP_
#define LTAMP_GRID_HPP_

#include <vector>

#include "ltamp/templates.hpp"

namespace ltamp {

struct UniformGrid {
  double x_min = 0.0;
  double v_min = 0.0;
  double eta_x = 0.005;
  double eta_v = 0.005;
  int nx = 0;
  int nv = 0;

  // Smallest grid with the given granularity whose cells cover `box`.
  static UniformGrid covering(const StateBox& box, double eta_x, double eta_v);

  int num_cells() const { return nx * nv; }
  int index(int ix, int iv) const { return ix * nv + iv; }
  int ix_of(int cell) const { return cell / nv; }
  int iv_of(int cell) const { return cell % nv; }
  double x_max() const { return x_min + nx * eta_x; }
  double v_max() const { return v_min + nv * eta_v; }
  StateBox bounds() const { return {{x_min, x_max()}, {v_min, v_max()}}; }

  // -1 outside the grid; upper boundaries clamp to the last cell.
  int cell_of(ComState s) const;
  ComState center(int cell) const;
  StateBox cell_box(int cell) const;

  bool operator==(const UniformGrid&) const = default;
};

// lo, lo + step, ..., up to hi inclusive.
std::vector<double> sample_controls(double lo, double hi, double step);

// Half-widths of an inflation box.
struct Inflation {
  double x = 0.0;
  double vx = 0.0;
};

// dev * e^(L h) + (e^(L h) - 1) / L * r, per dimension.
Inflation growth_inflation(double lipschitz, Inflation dev,
                           DisturbanceVector r, double h);

// Bound from the componentwise-absolute Jacobian [[0, 1], [|k|, 0]]; sound
// for any ratio of the half-widths.
Inflation metzler_inflation(double abs_k, Inflation dev, DisturbanceVector r,
                            double h);

// max(1, omega_max^2) for the pendulum templates, 1 otherwise.
double default_lipschitz(ModeKind mode, double omega_max);

struct GrowthBound {
  double lipschitz = 1.0;
  DisturbanceVector r;
  double h = 0.02;

  // Componentwise maximum of the two bounds for one control.
  Inflation inflate(const TemplateParams& params, Inflation dev) const;
};

}  // namespace ltamp

#endif  // LTAMP_GRID_HPP_
