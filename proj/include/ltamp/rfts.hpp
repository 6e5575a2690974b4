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

// Robust finite transition system of one walking step: candidate
// transitions between neighbouring keyframe cells, kept only when the
// chained reach synthesis succeeds.

#ifndef LTAMP_RFTS_HPP_
#define LTAMP_RFTS_HPP_

#include <vector>

#include <json.hpp>

#include "ltamp/policy_store.hpp"

namespace ltamp {

struct RftsTransition {
  RiemCell initial;
  PolicyHandle action = -1;
  RiemCell final;
};

struct RftsOws {
  TemplateParams params1;
  TemplateParams params2;
  int contact1 = -1;
  int contact2 = -1;
  Keyframe kf_initial;
  Keyframe kf_final;
  Margin margin_initial;
  Margin margin_final;
  std::vector<RiemCell> initial_cells;
  std::vector<RiemCell> final_cells;
  std::vector<RftsTransition> transitions;
  // Set when the nominal plan of the centre pair is infeasible.
  std::string infeasible;

  bool has(RiemCell initial, RiemCell final) const;
};

struct RftsOptions {
  CellPattern initial_pattern = CellPattern::kCenter;
  CellPattern final_pattern = CellPattern::kCenter;
  // 0 uses the hardware concurrency.
  int threads = 0;
  // Also store policies of rejected pairs.
  bool keep_rejected = false;
};

// Synthesizes every candidate pair and stores the admitted policies.
// Abstractions are built when `abs` is empty.
RftsOws build_rfts(const OwsProblem& problem, int contact1, int contact2,
                   PolicyStore& store, const RftsOptions& options = {},
                   OwsAbstractions abs = {});

nlohmann::json rfts_to_json(const RftsOws& rfts);
RftsOws rfts_from_json(const nlohmann::json& j);

}  // namespace ltamp

#endif  // LTAMP_RFTS_HPP_
