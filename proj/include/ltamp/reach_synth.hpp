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

// Backward reachability synthesis over a finite transition system: a FIFO
// queue seeded with the goal adds a cell once some action keeps every
// successor inside the current winning set.

#ifndef LTAMP_REACH_SYNTH_HPP_
#define LTAMP_REACH_SYNTH_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "ltamp/abstraction.hpp"

namespace ltamp {

struct ReachPolicy {
  int num_states = 0;
  int num_actions = 0;
  // K(q, a) at q * num_actions + a. Marked for every action whose
  // successors were all winning when q entered the winning set, so each
  // marked action strictly decreases the insertion order.
  CellSet allowed;
  // Insertion order into the winning set: 0 for goal cells, -1 outside.
  std::vector<std::int32_t> order;
  // Execution control per cell, -1 for goal and losing cells.
  std::vector<std::int16_t> chosen;

  bool allowed_at(int q, int a) const {
    return allowed.test(static_cast<std::size_t>(q) * num_actions + a);
  }
};

struct ReachResult {
  bool reachable = false;
  CellSet win;
  ReachPolicy policy;
};

// Reachable is true iff the winning set meets `init`. The winning set is
// returned even when it does not.
ReachResult reachability_control(const TransitionSystem& ts,
                                 const CellSet& init, const CellSet& goal);

// Lower is better; ties go to the lowest action index.
using ControlScore = std::function<double(int cell, int action)>;

void choose_controls(ReachResult& result, const ControlScore& score);
// Lowest allowed action index everywhere.
void choose_first_controls(ReachResult& result);

}  // namespace ltamp

#endif  // LTAMP_REACH_SYNTH_HPP_
