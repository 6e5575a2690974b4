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

#include "ltamp/reach_synth.hpp"

#include <deque>

#include "ltamp/error.hpp"

namespace ltamp {

ReachResult reachability_control(const TransitionSystem& ts,
                                 const CellSet& init, const CellSet& goal) {
  const int n = ts.num_states();
  const int m = ts.num_actions();
  if (static_cast<int>(goal.size()) != n || static_cast<int>(init.size()) != n) {
    throw Error(ErrorCode::kConfiguration, "cell set size mismatch");
  }
  ReachResult out;
  out.win = goal;
  ReachPolicy& pol = out.policy;
  pol.num_states = n;
  pol.num_actions = m;
  pol.allowed.resize(static_cast<std::size_t>(n) * m);
  pol.order.assign(n, -1);
  pol.chosen.assign(n, -1);

  std::deque<int> queue;
  for (auto g = goal.find_first(); g != CellSet::npos; g = goal.find_next(g)) {
    pol.order[g] = 0;
    queue.push_back(static_cast<int>(g));
  }
  std::int32_t next = 1;
  std::vector<StateAction> preds;
  while (!queue.empty()) {
    const int target = queue.front();
    queue.pop_front();
    ts.predecessors(target, preds);
    for (const StateAction& qa : preds) {
      if (out.win.test(qa.state)) continue;
      if (!ts.successors_within(qa.state, qa.action, out.win)) continue;
      const int q = qa.state;
      for (int a = 0; a < m; ++a) {
        if (ts.successors_within(q, a, out.win)) {
          pol.allowed.set(static_cast<std::size_t>(q) * m + a);
        }
      }
      out.win.set(q);
      pol.order[q] = next++;
      queue.push_back(q);
    }
  }
  out.reachable = out.win.intersects(init);
  return out;
}

void choose_controls(ReachResult& result, const ControlScore& score) {
  ReachPolicy& pol = result.policy;
  for (int q = 0; q < pol.num_states; ++q) {
    pol.chosen[q] = -1;
    if (pol.order[q] <= 0) continue;
    double best = 0.0;
    for (int a = 0; a < pol.num_actions; ++a) {
      if (!pol.allowed_at(q, a)) continue;
      const double s = score(q, a);
      if (pol.chosen[q] < 0 || s < best) {
        best = s;
        pol.chosen[q] = static_cast<std::int16_t>(a);
      }
    }
  }
}

void choose_first_controls(ReachResult& result) {
  choose_controls(result, [](int, int) { return 0.0; });
}

}  // namespace ltamp
