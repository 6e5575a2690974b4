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

#include "ltamp/grid.hpp"

#include <algorithm>
#include <cmath>

#include "ltamp/error.hpp"

namespace ltamp {
namespace {

int count_cells(double lo, double hi, double eta) {
  if (!(eta > 0.0) || !(hi > lo)) {
    throw Error(ErrorCode::kConfiguration, "grid needs eta > 0 and a non-empty box");
  }
  return std::max(1, static_cast<int>(std::ceil((hi - lo) / eta - 1e-9)));
}

}  // namespace

UniformGrid UniformGrid::covering(const StateBox& box, double eta_x,
                                  double eta_v) {
  UniformGrid g;
  g.x_min = box.x.lo;
  g.v_min = box.vx.lo;
  g.eta_x = eta_x;
  g.eta_v = eta_v;
  g.nx = count_cells(box.x.lo, box.x.hi, eta_x);
  g.nv = count_cells(box.vx.lo, box.vx.hi, eta_v);
  return g;
}

int UniformGrid::cell_of(ComState s) const {
  const double fx = std::floor((s.x - x_min) / eta_x);
  const double fv = std::floor((s.vx - v_min) / eta_v);
  if (!(fx >= 0.0) || !(fv >= 0.0)) return -1;
  int ix = static_cast<int>(std::min(fx, static_cast<double>(nx)));
  int iv = static_cast<int>(std::min(fv, static_cast<double>(nv)));
  if (ix == nx) {
    if (s.x > x_max()) return -1;
    ix = nx - 1;
  }
  if (iv == nv) {
    if (s.vx > v_max()) return -1;
    iv = nv - 1;
  }
  return index(ix, iv);
}

ComState UniformGrid::center(int cell) const {
  return {x_min + (ix_of(cell) + 0.5) * eta_x,
          v_min + (iv_of(cell) + 0.5) * eta_v};
}

StateBox UniformGrid::cell_box(int cell) const {
  const double x0 = x_min + ix_of(cell) * eta_x;
  const double v0 = v_min + iv_of(cell) * eta_v;
  return {{x0, x0 + eta_x}, {v0, v0 + eta_v}};
}

std::vector<double> sample_controls(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw Error(ErrorCode::kConfiguration, "empty control sample set");
  }
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> out;
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) out.push_back(std::min(hi, lo + i * step));
  return out;
}

Inflation growth_inflation(double lipschitz, Inflation dev,
                           DisturbanceVector r, double h) {
  const double e = std::exp(lipschitz * h);
  const double g = std::expm1(lipschitz * h) / lipschitz;
  return {dev.x * e + g * r.dx, dev.vx * e + g * r.dvx};
}

Inflation metzler_inflation(double abs_k, Inflation dev, DisturbanceVector r,
                            double h) {
  // e^{Mh} = [[c, s/w], [w s, c]] and its integral over [0, h] for
  // M = [[0, 1], [a, 0]], w = sqrt(a); the a = 0 limits are polynomial.
  double c = 1.0, s_over_w = h, w_s = 0.0;
  double i11 = h, i12 = 0.5 * h * h, i21 = 0.0;
  if (abs_k > 0.0) {
    const double w = std::sqrt(abs_k);
    c = std::cosh(w * h);
    s_over_w = std::sinh(w * h) / w;
    w_s = w * std::sinh(w * h);
    i11 = s_over_w;
    i12 = (c - 1.0) / abs_k;
    i21 = c - 1.0;
  }
  return {c * dev.x + s_over_w * dev.vx + i11 * r.dx + i12 * r.dvx,
          w_s * dev.x + c * dev.vx + i21 * r.dx + i11 * r.dvx};
}

double default_lipschitz(ModeKind mode, double omega_max) {
  if (is_constant_accel(mode)) return 1.0;
  return std::max(1.0, omega_max * omega_max);
}

Inflation GrowthBound::inflate(const TemplateParams& params,
                               Inflation dev) const {
  const Inflation a = growth_inflation(lipschitz, dev, r, h);
  const Inflation b =
      metzler_inflation(std::abs(affine_accel(params).k), dev, r, h);
  return {std::max(a.x, b.x), std::max(a.vx, b.vx)};
}

}  // namespace ltamp
