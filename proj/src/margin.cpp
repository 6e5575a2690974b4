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

#include "ltamp/margin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>

#include "ltamp/error.hpp"

namespace ltamp {
namespace {

bool needs_positive_speed(const RiemChart& chart) {
  if (chart.params.mode == ModeKind::kHm) return false;
  return !is_constant_accel(chart.params.mode) || chart.ref.vx != 0.0;
}

// The chart is undefined for non-positive speed; those states are never
// inside a set that needs it.
std::optional<StateBox> clip_speed(const RiemChart& chart, StateBox box) {
  if (!needs_positive_speed(chart)) return box;
  if (box.vx.hi <= 0.0) return std::nullopt;
  box.vx.lo = std::max(box.vx.lo, 1e-12);
  return box;
}

bool intersects_rec(const MarginSet& set, const RiemBox& target,
                    const StateBox& box, int depth) {
  const RiemBox r = set.chart.range(box);
  if (!r.zeta.intersects(target.zeta) || !r.sigma.intersects(target.sigma)) {
    return false;
  }
  if (r.zeta.inside(target.zeta) && r.sigma.inside(target.sigma)) return true;
  const ComState mid{0.5 * (box.x.lo + box.x.hi), 0.5 * (box.vx.lo + box.vx.hi)};
  if (in_margin(set, mid)) return true;
  if (depth == 0) return true;
  const StateBox quads[4] = {
      {{box.x.lo, mid.x}, {box.vx.lo, mid.vx}},
      {{mid.x, box.x.hi}, {box.vx.lo, mid.vx}},
      {{box.x.lo, mid.x}, {mid.vx, box.vx.hi}},
      {{mid.x, box.x.hi}, {mid.vx, box.vx.hi}},
  };
  for (const StateBox& q : quads) {
    if (intersects_rec(set, target, q, depth - 1)) return true;
  }
  return false;
}

int half_count(double margin, double nu) {
  return static_cast<int>(std::ceil(margin / nu + 0.5 - 1e-9)) - 1;
}

}  // namespace

RiemCoord MarginSet::center() const {
  const RiemCoord kf_image = chart.map(chart.kf.state());
  return {kf_image.zeta + offset.zeta, kf_image.sigma + offset.sigma};
}

RiemBox MarginSet::box() const {
  const RiemCoord c = center();
  return {{c.zeta - margin.d_zeta, c.zeta + margin.d_zeta},
          {c.sigma - margin.d_sigma, c.sigma + margin.d_sigma}};
}

MarginSet make_margin_set(const TemplateParams& params, Keyframe kf,
                          Margin margin) {
  return make_margin_set(make_chart(params, kf), margin);
}

MarginSet make_margin_set(const RiemChart& chart, Margin margin) {
  if (!(margin.d_zeta > 0.0) || !(margin.d_sigma > 0.0)) {
    throw Error(ErrorCode::kConfiguration, "margins must be positive");
  }
  return {chart, margin, {}};
}

bool in_margin(const MarginSet& set, RiemCoord rc) {
  const RiemBox b = set.box();
  return b.zeta.contains(rc.zeta) && b.sigma.contains(rc.sigma);
}

bool in_margin(const MarginSet& set, ComState s) {
  if (needs_positive_speed(set.chart) && !(s.vx > 0.0)) return false;
  return in_margin(set, set.chart.map(s));
}

bool box_inside(const MarginSet& set, const StateBox& box) {
  if (needs_positive_speed(set.chart) && !(box.vx.lo > 0.0)) return false;
  const RiemBox r = set.chart.range(box);
  const RiemBox t = set.box();
  return r.zeta.inside(t.zeta) && r.sigma.inside(t.sigma);
}

bool box_intersects(const MarginSet& set, const StateBox& box, int depth) {
  const std::optional<StateBox> clipped = clip_speed(set.chart, box);
  if (!clipped) return false;
  return intersects_rec(set, set.box(), *clipped, depth);
}

std::vector<RiemCell> neighbor_cells(const RiemGrid& grid, const MarginSet& set) {
  if (!(grid.nu_zeta > 0.0) || !(grid.nu_sigma > 0.0)) {
    throw Error(ErrorCode::kConfiguration, "granularity must be positive");
  }
  const double tol = 1e-12;
  if (set.margin.d_zeta < grid.nu_zeta * (1.0 - tol) ||
      set.margin.d_sigma < grid.nu_sigma * (1.0 - tol)) {
    throw Error(ErrorCode::kConfiguration,
                "margin smaller than the keyframe grid granularity");
  }
  const int kz = half_count(set.margin.d_zeta, grid.nu_zeta);
  const int ks = half_count(set.margin.d_sigma, grid.nu_sigma);
  std::vector<RiemCell> cells;
  cells.reserve(static_cast<std::size_t>((2 * kz + 1) * (2 * ks + 1)));
  for (int i = -kz; i <= kz; ++i) {
    for (int j = -ks; j <= ks; ++j) cells.push_back({i, j});
  }
  return cells;
}

MarginSet cell_margin_set(const MarginSet& base, const RiemGrid& grid,
                          RiemCell cell) {
  MarginSet out = base;
  out.offset = {base.offset.zeta + cell.i_zeta * grid.nu_zeta,
                base.offset.sigma + cell.i_sigma * grid.nu_sigma};
  return out;
}

CellPattern cell_pattern_from_name(std::string_view name) {
  if (name == "center") return CellPattern::kCenter;
  if (name == "cross") return CellPattern::kCross;
  if (name == "block") return CellPattern::kBlock;
  throw Error(ErrorCode::kConfiguration,
              "unknown cell pattern " + std::string(name));
}

std::vector<RiemCell> select_cells(const std::vector<RiemCell>& cells,
                                   CellPattern pattern) {
  std::vector<RiemCell> out;
  const RiemCell center{0, 0};
  if (std::find(cells.begin(), cells.end(), center) != cells.end()) {
    out.push_back(center);
  }
  if (pattern == CellPattern::kCenter) return out;
  for (const RiemCell& c : cells) {
    if (c == center) continue;
    const int az = std::abs(c.i_zeta);
    const int as = std::abs(c.i_sigma);
    const bool keep = pattern == CellPattern::kCross ? az + as == 1
                                                     : az <= 1 && as <= 1;
    if (keep) out.push_back(c);
  }
  return out;
}

}  // namespace ltamp
