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

// Robustness margin sets: (zeta, sigma) boxes around a keyframe image, and
// the Riemannian grid of neighbouring keyframe cells.

#ifndef LTAMP_MARGIN_HPP_
#define LTAMP_MARGIN_HPP_

#include <string_view>
#include <vector>

#include "ltamp/templates.hpp"

namespace ltamp {

struct Margin {
  double d_zeta = 0.05;
  double d_sigma = 0.002;

  bool operator==(const Margin&) const = default;
};

inline bool operator<=(const Margin& a, const Margin& b) {
  return a.d_zeta <= b.d_zeta && a.d_sigma <= b.d_sigma;
}

struct MarginSet {
  RiemChart chart;
  Margin margin;
  // Shift of the box centre from the keyframe image, non-zero for
  // neighbouring cells.
  RiemCoord offset;

  const Keyframe& keyframe() const { return chart.kf; }
  const TemplateParams& params() const { return chart.params; }
  RiemCoord center() const;
  RiemBox box() const;
};

MarginSet make_margin_set(const TemplateParams& params, Keyframe kf,
                          Margin margin);
MarginSet make_margin_set(const RiemChart& chart, Margin margin);

bool in_margin(const MarginSet& set, ComState s);
bool in_margin(const MarginSet& set, RiemCoord rc);

// Every state of `box` maps inside the set.
bool box_inside(const MarginSet& set, const StateBox& box);
// Some state of `box` maps inside the set. Decided by interval bounds with
// recursive bisection; undecided leaves at `depth` count as intersecting.
bool box_intersects(const MarginSet& set, const StateBox& box, int depth = 6);

// Granularity of the keyframe cell grid in (zeta, sigma).
struct RiemGrid {
  double nu_zeta = 0.05;
  double nu_sigma = 0.002;
};

struct RiemCell {
  int i_zeta = 0;
  int i_sigma = 0;

  bool operator==(const RiemCell&) const = default;
};

inline RiemGrid grid_from_margin(Margin m) { return {m.d_zeta, m.d_sigma}; }

// Cells of width nu centred on multiples of nu that overlap the set.
std::vector<RiemCell> neighbor_cells(const RiemGrid& grid, const MarginSet& set);

// The margin set of a neighbouring keyframe cell: same chart and margin,
// centre moved by the cell index.
MarginSet cell_margin_set(const MarginSet& base, const RiemGrid& grid,
                          RiemCell cell);

enum class CellPattern { kCenter, kCross, kBlock };

CellPattern cell_pattern_from_name(std::string_view name);
// Restricts a neighbour block to the pattern; the centre cell comes first.
std::vector<RiemCell> select_cells(const std::vector<RiemCell>& cells,
                                   CellPattern pattern);

}  // namespace ltamp

#endif  // LTAMP_MARGIN_HPP_
