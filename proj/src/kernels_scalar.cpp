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

#include <algorithm>
#include <cmath>

#include "ltamp/kernels.hpp"

namespace ltamp {

void successor_boxes_scalar(const BoxKernelArgs& a) {
  const double hh = 0.5 * a.h;
  const double h6 = a.h / 6.0;
  const double upper_x = static_cast<double>(a.nx);
  const double upper_v = static_cast<double>(a.nv);
  for (std::size_t i = 0; i < a.n; ++i) {
    const double x = a.x[i];
    const double v = a.v[i];
    const double k1x = v;
    const double k1v = a.k * x + a.m;
    const double k2x = v + hh * k1v;
    const double k2v = a.k * (x + hh * k1x) + a.m;
    const double k3x = v + hh * k2v;
    const double k3v = a.k * (x + hh * k2x) + a.m;
    const double k4x = v + a.h * k3v;
    const double k4v = a.k * (x + a.h * k3x) + a.m;
    const double xn = x + h6 * (((k1x + 2.0 * k2x) + 2.0 * k3x) + k4x);
    const double vn = v + h6 * (((k1v + 2.0 * k2v) + 2.0 * k3v) + k4v);
    if (a.img_x) a.img_x[i] = xn;
    if (a.img_v) a.img_v[i] = vn;

    const double fx_lo = std::floor(((xn - a.infl_x) - a.x_min) / a.eta_x);
    const double gx_hi = ((xn + a.infl_x) - a.x_min) / a.eta_x;
    const double fv_lo = std::floor(((vn - a.infl_v) - a.v_min) / a.eta_v);
    const double gv_hi = ((vn + a.infl_v) - a.v_min) / a.eta_v;
    // Also rejects NaN images.
    const bool inside = fx_lo >= 0.0 && gx_hi <= upper_x && fv_lo >= 0.0 &&
                        gv_hi <= upper_v;
    SuccessorBox& b = a.out[i];
    if (!inside) {
      b = SuccessorBox{};
      continue;
    }
    const double fx_hi = std::min(std::floor(gx_hi), upper_x - 1.0);
    const double fv_hi = std::min(std::floor(gv_hi), upper_v - 1.0);
    b.x_lo = static_cast<std::int16_t>(fx_lo);
    b.x_hi = static_cast<std::int16_t>(fx_hi);
    b.v_lo = static_cast<std::int16_t>(fv_lo);
    b.v_hi = static_cast<std::int16_t>(fv_hi);
  }
}

}  // namespace ltamp
