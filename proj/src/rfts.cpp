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

#include "ltamp/rfts.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <thread>

#include "ltamp/error.hpp"
#include "ltamp/policy_io.hpp"

namespace ltamp {

using nlohmann::json;

bool RftsOws::has(RiemCell initial, RiemCell final) const {
  return std::any_of(transitions.begin(), transitions.end(), [&](const RftsTransition& t) {
    return t.initial == initial && t.final == final;
  });
}

namespace {

// Runs f(i) for i in [0, n) on up to `threads` workers.
template <typename F>
void parallel_for(int n, int threads, F&& f) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::future<void>> workers;
  for (int t = 0; t < threads; ++t) {
    workers.push_back(std::async(std::launch::async, [&] {
      for (int i = next++; i < n; i = next++) f(i);
    }));
  }
  for (auto& w : workers) w.get();
}

}  // namespace

RftsOws build_rfts(const OwsProblem& problem, int contact1, int contact2,
                   PolicyStore& store, const RftsOptions& options,
                   OwsAbstractions abs) {
  RftsOws out;
  out.params1 = problem.params1;
  out.params2 = problem.params2;
  out.contact1 = contact1;
  out.contact2 = contact2;
  out.kf_initial = problem.kf_initial;
  out.kf_final = problem.kf_final;
  out.margin_initial = problem.margin_initial;
  out.margin_final = problem.margin_final;

  OwsGeometry base;
  try {
    base = ows_geometry(problem);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInfeasibleStep && e.code() != ErrorCode::kDegeneratePlan) throw;
    out.infeasible = e.what();
    return out;
  }
  out.initial_cells = select_cells(
      neighbor_cells(grid_from_margin(problem.margin_initial), base.initial_set),
      options.initial_pattern);
  out.final_cells = select_cells(
      neighbor_cells(grid_from_margin(problem.margin_final), base.final_set),
      options.final_pattern);

  if (!abs.first || !abs.second) abs = build_ows_abstractions(problem);

  const int nf = static_cast<int>(out.final_cells.size());
  const int ni = static_cast<int>(out.initial_cells.size());
  std::vector<OwsSecondStage> stages(nf);
  parallel_for(nf, options.threads, [&](int j) {
    stages[j] = synthesize_second_stage(problem, abs, out.final_cells[j]);
  });
  std::vector<std::optional<OwsPolicy>> policies(ni * nf);
  parallel_for(ni * nf, options.threads, [&](int k) {
    const RiemCell ci = out.initial_cells[k / nf];
    const OwsSynthesis s = synthesize_ows(problem, abs, ci, stages[k % nf]);
    if (!s.reachable() && !options.keep_rejected) return;
    policies[k] = make_policy(policy_key(problem, ci, out.final_cells[k % nf], contact1, contact2),
                              problem, s);
  });
  // Stored in candidate order so handles do not depend on scheduling.
  for (int k = 0; k < ni * nf; ++k) {
    if (!policies[k]) continue;
    const bool ok = policies[k]->reachable;
    const PolicyHandle h = store.store(std::move(*policies[k]));
    if (ok) out.transitions.push_back({out.initial_cells[k / nf], h, out.final_cells[k % nf]});
  }
  return out;
}

namespace {

json cells_json(const std::vector<RiemCell>& cells) {
  json a = json::array();
  for (const RiemCell& c : cells) a.push_back({c.i_zeta, c.i_sigma});
  return a;
}

RiemCell cell_from(const json& a) { return {a.at(0).get<int>(), a.at(1).get<int>()}; }

}  // namespace

json rfts_to_json(const RftsOws& r) {
  json t = json::array();
  for (const RftsTransition& tr : r.transitions) {
    t.push_back({{"initial", {tr.initial.i_zeta, tr.initial.i_sigma}},
                 {"policy", tr.action},
                 {"final", {tr.final.i_zeta, tr.final.i_sigma}}});
  }
  json j = {{"format", "ltamp-rfts"},
            {"modes", {params_to_json(r.params1), params_to_json(r.params2)}},
            {"contacts", {r.contact1, r.contact2}},
            {"kf_initial", {r.kf_initial.contact_x, r.kf_initial.apex_vx}},
            {"kf_final", {r.kf_final.contact_x, r.kf_final.apex_vx}},
            {"margin_initial", {r.margin_initial.d_zeta, r.margin_initial.d_sigma}},
            {"margin_final", {r.margin_final.d_zeta, r.margin_final.d_sigma}},
            {"initial_cells", cells_json(r.initial_cells)},
            {"final_cells", cells_json(r.final_cells)},
            {"transitions", t}};
  if (!r.infeasible.empty()) j["infeasible"] = r.infeasible;
  return j;
}

RftsOws rfts_from_json(const json& j) {
  if (j.value("format", "") != "ltamp-rfts") {
    throw Error(ErrorCode::kIo, "not an rfts document");
  }
  RftsOws r;
  r.params1 = params_from_json(j.at("modes").at(0));
  r.params2 = params_from_json(j.at("modes").at(1));
  r.contact1 = j.at("contacts").at(0).get<int>();
  r.contact2 = j.at("contacts").at(1).get<int>();
  r.kf_initial = {j.at("kf_initial").at(0).get<double>(), j.at("kf_initial").at(1).get<double>()};
  r.kf_final = {j.at("kf_final").at(0).get<double>(), j.at("kf_final").at(1).get<double>()};
  r.margin_initial = {j.at("margin_initial").at(0).get<double>(), j.at("margin_initial").at(1).get<double>()};
  r.margin_final = {j.at("margin_final").at(0).get<double>(), j.at("margin_final").at(1).get<double>()};
  for (const json& c : j.at("initial_cells")) r.initial_cells.push_back(cell_from(c));
  for (const json& c : j.at("final_cells")) r.final_cells.push_back(cell_from(c));
  for (const json& t : j.at("transitions")) {
    r.transitions.push_back({cell_from(t.at("initial")), t.at("policy").get<int>(),
                             cell_from(t.at("final"))});
  }
  r.infeasible = j.value("infeasible", "");
  return r;
}

}  // namespace ltamp
