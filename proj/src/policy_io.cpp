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

#include "ltamp/policy_io.hpp"

#include <fstream>

#include "ltamp/encoding.hpp"
#include "ltamp/error.hpp"
#include "ltamp/kernels.hpp"

namespace ltamp {

using nlohmann::json;

namespace {

constexpr int kPolicyVersion = 1;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

json pair(double a, double b) { return json::array({a, b}); }

}  // namespace

json params_to_json(const TemplateParams& p) {
  return {{"mode", mode_name(p.mode)}, {"omega", p.omega}, {"contact_x", p.contact_x}};
}

TemplateParams params_from_json(const json& j) {
  return {mode_from_name(j.at("mode").get<std::string>()),
          j.value("omega", 0.0), j.value("contact_x", 0.0)};
}

json grid_to_json(const UniformGrid& g) {
  return {{"x_min", g.x_min}, {"v_min", g.v_min}, {"eta_x", g.eta_x},
          {"eta_v", g.eta_v}, {"nx", g.nx},       {"nv", g.nv}};
}

UniformGrid grid_from_json(const json& j) {
  UniformGrid g;
  g.x_min = j.at("x_min").get<double>();
  g.v_min = j.at("v_min").get<double>();
  g.eta_x = j.at("eta_x").get<double>();
  g.eta_v = j.at("eta_v").get<double>();
  g.nx = j.at("nx").get<int>();
  g.nv = j.at("nv").get<int>();
  return g;
}

json problem_to_json(const OwsProblem& p) {
  json j = {
      {"kf_initial", pair(p.kf_initial.contact_x, p.kf_initial.apex_vx)},
      {"kf_final", pair(p.kf_final.contact_x, p.kf_final.apex_vx)},
      {"params1", params_to_json(p.params1)},
      {"params2", params_to_json(p.params2)},
      {"controls1", {p.controls1.lo, p.controls1.hi, p.controls1.step}},
      {"controls2", {p.controls2.lo, p.controls2.hi, p.controls2.step}},
      {"margin_initial", pair(p.margin_initial.d_zeta, p.margin_initial.d_sigma)},
      {"margin_final", pair(p.margin_final.d_zeta, p.margin_final.d_sigma)},
      {"disturbance", pair(p.r.dx, p.r.dvx)},
      {"step", p.step},
      {"lipschitz", pair(p.lipschitz1, p.lipschitz2)},
      {"grid", grid_to_json(p.grid)},
  };
  if (p.switch_x) j["switch_x"] = pair(p.switch_x->lo, p.switch_x->hi);
  j["switch_cells"] = p.switch_cells == OwsProblem::SwitchCells::kTouch ? "touch" : "center";
  j["switch_band"] = p.switch_band;
  return j;
}

OwsProblem problem_from_json(const json& j) {
  auto kf = [](const json& a) { return Keyframe{a.at(0).get<double>(), a.at(1).get<double>()}; };
  auto range = [](const json& a) {
    return ControlRange{a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
  };
  auto margin = [](const json& a) { return Margin{a.at(0).get<double>(), a.at(1).get<double>()}; };
  OwsProblem p;
  p.kf_initial = kf(j.at("kf_initial"));
  p.kf_final = kf(j.at("kf_final"));
  p.params1 = params_from_json(j.at("params1"));
  p.params2 = params_from_json(j.at("params2"));
  p.controls1 = range(j.at("controls1"));
  p.controls2 = range(j.at("controls2"));
  p.margin_initial = margin(j.at("margin_initial"));
  p.margin_final = margin(j.at("margin_final"));
  p.r = {j.at("disturbance").at(0).get<double>(), j.at("disturbance").at(1).get<double>()};
  p.step = j.at("step").get<double>();
  if (j.contains("lipschitz")) {
    p.lipschitz1 = j["lipschitz"].at(0).get<double>();
    p.lipschitz2 = j["lipschitz"].at(1).get<double>();
  }
  p.grid = grid_from_json(j.at("grid"));
  if (j.contains("switch_x")) {
    p.switch_x = Interval{j["switch_x"].at(0).get<double>(), j["switch_x"].at(1).get<double>()};
  }
  p.switch_cells = switch_cells_from_name(j.value("switch_cells", "center"));
  p.switch_band = j.value("switch_band", 1.0);
  return p;
}

json key_to_json(const PolicyKey& k) {
  return {
      {"params1", params_to_json(k.params1)},
      {"params2", params_to_json(k.params2)},
      {"contact1", k.contact1},
      {"contact2", k.contact2},
      {"kf_initial", pair(k.kf_initial.contact_x, k.kf_initial.apex_vx)},
      {"kf_final", pair(k.kf_final.contact_x, k.kf_final.apex_vx)},
      {"cell_initial", {k.cell_initial.i_zeta, k.cell_initial.i_sigma}},
      {"cell_final", {k.cell_final.i_zeta, k.cell_final.i_sigma}},
      {"margin_initial", pair(k.margin_initial.d_zeta, k.margin_initial.d_sigma)},
      {"margin_final", pair(k.margin_final.d_zeta, k.margin_final.d_sigma)},
      {"disturbance", pair(k.r.dx, k.r.dvx)},
  };
}

PolicyKey key_from_json(const json& j) {
  auto kf = [](const json& a) { return Keyframe{a.at(0).get<double>(), a.at(1).get<double>()}; };
  auto cell = [](const json& a) { return RiemCell{a.at(0).get<int>(), a.at(1).get<int>()}; };
  auto margin = [](const json& a) { return Margin{a.at(0).get<double>(), a.at(1).get<double>()}; };
  PolicyKey k;
  k.params1 = params_from_json(j.at("params1"));
  k.params2 = params_from_json(j.at("params2"));
  k.contact1 = j.at("contact1").get<int>();
  k.contact2 = j.at("contact2").get<int>();
  k.kf_initial = kf(j.at("kf_initial"));
  k.kf_final = kf(j.at("kf_final"));
  k.cell_initial = cell(j.at("cell_initial"));
  k.cell_final = cell(j.at("cell_final"));
  k.margin_initial = margin(j.at("margin_initial"));
  k.margin_final = margin(j.at("margin_final"));
  k.r = {j.at("disturbance").at(0).get<double>(), j.at("disturbance").at(1).get<double>()};
  return k;
}

json policy_to_json(const OwsPolicy& p) {
  return {
      {"format", "ltamp-policy"},
      {"version", kPolicyVersion},
      {"key", key_to_json(p.key)},
      {"problem", problem_to_json(p.problem)},
      {"reachable", p.reachable},
      {"counts",
       {{"cells", p.grid().num_cells()},
        {"controls1", p.controls1.size()},
        {"controls2", p.controls2.size()},
        {"init", p.init_cells.count()},
        {"goal", p.goal_cells.count()},
        {"switch", p.switch_cells.count()},
        {"win1", p.win1.count()},
        {"win2", p.win2.count()}}},
      {"created", {{"tool", "ltamp"}, {"kernel", selected_kernel_name()}}},
      {"init_cells", bitset_to_base64(p.init_cells)},
      {"goal_cells", bitset_to_base64(p.goal_cells)},
      {"switch_cells", bitset_to_base64(p.switch_cells)},
      {"win1", bitset_to_base64(p.win1)},
      {"win2", bitset_to_base64(p.win2)},
      {"chosen1", p.chosen1},
      {"chosen2", p.chosen2},
  };
}

OwsPolicy policy_from_json(const json& j) {
  if (j.value("format", "") != "ltamp-policy" || j.value("version", 0) != kPolicyVersion) {
    throw Error(ErrorCode::kIo, "not an ltamp policy document");
  }
  OwsPolicy p;
  p.key = key_from_json(j.at("key"));
  p.problem = problem_from_json(j.at("problem"));
  p.reachable = j.at("reachable").get<bool>();
  const std::size_t n = static_cast<std::size_t>(p.problem.grid.num_cells());
  auto bits = [&](const char* name) {
    return bitset_from_base64(j.at(name).get<std::string>(), n);
  };
  p.init_cells = bits("init_cells");
  p.goal_cells = bits("goal_cells");
  p.switch_cells = bits("switch_cells");
  p.win1 = bits("win1");
  p.win2 = bits("win2");
  p.chosen1 = j.at("chosen1").get<std::vector<std::int16_t>>();
  p.chosen2 = j.at("chosen2").get<std::vector<std::int16_t>>();
  finish_policy(p);
  return p;
}

void save_policy(const std::filesystem::path& path, const OwsPolicy& p) {
  write_json(path, policy_to_json(p));
}

OwsPolicy load_policy(const std::filesystem::path& path) {
  try {
    return policy_from_json(read_json(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, path.string() + ": " + e.what());
  }
}

void save_store(const std::filesystem::path& dir, const PolicyStore& store) {
  std::filesystem::create_directories(dir);
  json index = {{"format", "ltamp-policy-index"}, {"version", kPolicyVersion},
                {"entries", json::array()}};
  for (int h = 0; h < store.size(); ++h) {
    const OwsPolicy& p = store.get(h);
    const std::string file = p.key.id() + ".json";
    save_policy(dir / file, p);
    index["entries"].push_back({{"handle", h},
                                {"file", file},
                                {"reachable", p.reachable},
                                {"key", key_to_json(p.key)}});
  }
  write_json(dir / "index.json", index);
}

PolicyStore load_store(const std::filesystem::path& dir) {
  const json index = read_json(dir / "index.json");
  if (index.value("format", "") != "ltamp-policy-index") {
    throw Error(ErrorCode::kIo, "not a policy index");
  }
  PolicyStore store;
  for (const json& e : index.at("entries")) {
    store.store(load_policy(dir / e.at("file").get<std::string>()));
  }
  return store;
}

}  // namespace ltamp
