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

#include "ltamp/policy_store.hpp"

#include <cstdio>

#include "ltamp/error.hpp"

namespace ltamp {
namespace {

bool same_params(const TemplateParams& a, const TemplateParams& b) {
  return a.mode == b.mode && a.omega == b.omega && a.contact_x == b.contact_x;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

bool PolicyKey::same_step(const PolicyKey& o) const {
  return same_params(params1, o.params1) && same_params(params2, o.params2) &&
         kf_initial == o.kf_initial && kf_final == o.kf_final;
}

bool PolicyKey::operator==(const PolicyKey& o) const {
  return same_step(o) && contact1 == o.contact1 && contact2 == o.contact2 &&
         cell_initial == o.cell_initial && cell_final == o.cell_final &&
         margin_initial == o.margin_initial && margin_final == o.margin_final &&
         r.dx == o.r.dx && r.dvx == o.r.dvx;
}

std::string PolicyKey::id() const {
  std::string s;
  s += std::string(mode_name(params1.mode)) + "_" + fmt(kf_initial.contact_x) +
       "_" + fmt(kf_initial.apex_vx);
  s += "_c" + std::to_string(cell_initial.i_zeta) + "." +
       std::to_string(cell_initial.i_sigma);
  s += "__" + std::string(mode_name(params2.mode)) + "_" +
       fmt(kf_final.contact_x) + "_" + fmt(kf_final.apex_vx);
  s += "_c" + std::to_string(cell_final.i_zeta) + "." +
       std::to_string(cell_final.i_sigma);
  s += "__r" + fmt(r.dx) + "_" + fmt(r.dvx);
  return s;
}

PolicyKey policy_key(const OwsProblem& p, RiemCell initial, RiemCell final,
                     int contact1, int contact2) {
  return {p.params1,       p.params2,     contact1, contact2,
          p.kf_initial,    p.kf_final,    initial,  final,
          p.margin_initial, p.margin_final, p.r};
}

bool OwsPolicy::in_win(int phase, int cell) const {
  if (cell < 0) return false;
  return phase == 1 ? win1.test(cell) : win2.test(cell);
}

OwsPolicy make_policy(const PolicyKey& key, const OwsProblem& problem,
                      const OwsSynthesis& s) {
  OwsPolicy p;
  p.key = key;
  p.problem = problem;
  p.reachable = s.reachable();
  p.init_cells = s.init_cells;
  p.goal_cells = s.goal_cells;
  p.switch_cells = s.switch_cells;
  p.win1 = s.first.win;
  p.win2 = s.second.win;
  p.chosen1 = s.first.policy.chosen;
  p.chosen2 = s.second.policy.chosen;
  finish_policy(p);
  return p;
}

void finish_policy(OwsPolicy& p) {
  p.geometry = ows_geometry(p.problem, p.key.cell_initial, p.key.cell_final);
  auto samples = [](const TemplateParams& params, const ControlRange& u) {
    return params.mode == ModeKind::kHm ? std::vector<double>{0.0} : u.samples();
  };
  p.controls1 = samples(p.problem.params1, p.problem.controls1);
  p.controls2 = samples(p.problem.params2, p.problem.controls2);
  const std::size_t n = static_cast<std::size_t>(p.problem.grid.num_cells());
  if (p.win1.size() != n || p.win2.size() != n || p.switch_cells.size() != n ||
      p.goal_cells.size() != n || p.init_cells.size() != n ||
      p.chosen1.size() != n || p.chosen2.size() != n) {
    throw Error(ErrorCode::kConfiguration, "policy arrays do not match the grid");
  }
}

PolicyHandle PolicyStore::store(OwsPolicy policy) {
  if (auto h = find(policy.key)) {
    warnings_.push_back("replaced policy " + policy.key.id());
    entries_[*h] = std::make_shared<const OwsPolicy>(std::move(policy));
    return *h;
  }
  entries_.push_back(std::make_shared<const OwsPolicy>(std::move(policy)));
  return size() - 1;
}

const OwsPolicy& PolicyStore::get(PolicyHandle h) const {
  if (h < 0 || h >= size()) throw Error(ErrorCode::kIndex, "bad policy handle");
  return *entries_[h];
}

std::optional<PolicyHandle> PolicyStore::find(const PolicyKey& key) const {
  for (int h = 0; h < size(); ++h) {
    if (entries_[h]->key == key) return h;
  }
  return std::nullopt;
}

std::vector<PolicyHit> PolicyStore::lookup(ComState s) const {
  std::vector<PolicyHit> out;
  for (int h = 0; h < size(); ++h) {
    const OwsPolicy& p = *entries_[h];
    const int c = p.cell_of(s);
    if (p.in_win(1, c)) {
      out.push_back({h, 1});
    } else if (p.in_win(2, c)) {
      out.push_back({h, 2});
    }
  }
  return out;
}

std::vector<PolicyHandle> PolicyStore::lookup(ComState s, int phase,
                                              const PolicyKey& step) const {
  std::vector<PolicyHandle> out;
  for (int h = 0; h < size(); ++h) {
    const OwsPolicy& p = *entries_[h];
    if (!p.key.same_step(step)) continue;
    if (p.in_win(phase, p.cell_of(s))) out.push_back(h);
  }
  return out;
}

}  // namespace ltamp
