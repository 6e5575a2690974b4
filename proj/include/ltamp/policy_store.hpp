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

// Library of synthesized one-walking-step controllers, keyed by the mode
// pair, contact pair, keyframe cells, margins and disturbance bound.

#ifndef LTAMP_POLICY_STORE_HPP_
#define LTAMP_POLICY_STORE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ltamp/ows_synthesis.hpp"

namespace ltamp {

struct PolicyKey {
  TemplateParams params1;
  TemplateParams params2;
  // Contact configurations as system action indices, -1 when unset.
  int contact1 = -1;
  int contact2 = -1;
  Keyframe kf_initial;
  Keyframe kf_final;
  RiemCell cell_initial;
  RiemCell cell_final;
  Margin margin_initial;
  Margin margin_final;
  DisturbanceVector r;

  bool operator==(const PolicyKey& o) const;
  // Same step: keyframes and templates agree, cells may differ.
  bool same_step(const PolicyKey& o) const;
  // Readable, filename-safe fingerprint.
  std::string id() const;
};

PolicyKey policy_key(const OwsProblem& problem, RiemCell initial,
                     RiemCell final, int contact1 = -1, int contact2 = -1);

// Everything execution needs; the geometry is derived from the problem.
struct OwsPolicy {
  PolicyKey key;
  OwsProblem problem;
  OwsGeometry geometry;
  bool reachable = false;
  CellSet init_cells;
  CellSet goal_cells;
  CellSet switch_cells;
  CellSet win1;
  CellSet win2;
  std::vector<std::int16_t> chosen1;
  std::vector<std::int16_t> chosen2;
  std::vector<double> controls1;
  std::vector<double> controls2;

  const UniformGrid& grid() const { return problem.grid; }
  // Cell of s under the policy grid, -1 outside.
  int cell_of(ComState s) const { return problem.grid.cell_of(s); }
  bool in_win(int phase, int cell) const;
};

OwsPolicy make_policy(const PolicyKey& key, const OwsProblem& problem,
                      const OwsSynthesis& synthesis);
// Recomputes geometry and control samples after loading.
void finish_policy(OwsPolicy& policy);

using PolicyHandle = int;

struct PolicyHit {
  PolicyHandle handle = -1;
  // 1 when the state's cell is in the first winning set, else 2.
  int phase = 1;
};

class PolicyStore {
 public:
  // A duplicate key replaces the stored entry and records a warning.
  PolicyHandle store(OwsPolicy policy);
  const OwsPolicy& get(PolicyHandle h) const;
  std::optional<PolicyHandle> find(const PolicyKey& key) const;
  int size() const { return static_cast<int>(entries_.size()); }

  // Every entry whose winning set holds the state's cell.
  std::vector<PolicyHit> lookup(ComState s) const;
  // Entries of the same step whose phase winning set holds the state.
  std::vector<PolicyHandle> lookup(ComState s, int phase,
                                   const PolicyKey& step) const;

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::vector<std::shared_ptr<const OwsPolicy>> entries_;
  std::vector<std::string> warnings_;
};

}  // namespace ltamp

#endif  // LTAMP_POLICY_STORE_HPP_
