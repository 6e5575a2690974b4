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
#include "ltamp/scenario.hpp"

#include <fstream>

#include "ltamp/error.hpp"
#include "ltamp/policy_io.hpp"

namespace ltamp {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::kConfiguration, "scenario: " + what);
}

json pair(double a, double b) { return json::array({a, b}); }

DisturbanceVector vec(const json& a) {
  if (!a.is_array() || a.size() != 2) bad("expected a pair, got " + a.dump());
  return {a[0].get<double>(), a[1].get<double>()};
}

Margin margin(const json& a) {
  const DisturbanceVector v = vec(a);
  return {v.dx, v.dvx};
}

ControlRange controls(const json& a) {
  if (!a.is_array() || a.size() != 3) bad("controls need [lo, hi, step]");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

UniformGrid space(const json& j) {
  if (j.contains("nx")) return grid_from_json(j);
  const DisturbanceVector x = vec(j.at("x"));
  const DisturbanceVector v = vec(j.at("v"));
  const DisturbanceVector eta = vec(j.at("eta"));
  return UniformGrid::covering({{x.dx, x.dvx}, {v.dx, v.dvx}}, eta.dx, eta.dvx);
}

OwsProblem ows_from_json(const json& j) {
  OwsProblem p;
  const StepSpec a = step_spec_from_json(j.at("initial"), 3.0);
  const StepSpec b = step_spec_from_json(j.at("final"), 3.0);
  p.kf_initial = a.kf;
  p.kf_final = b.kf;
  p.params1 = a.params;
  p.params2 = b.params;
  const json& u = j.at("controls");
  p.controls1 = controls(u.at(0));
  p.controls2 = controls(u.at(1));
  const json& m = j.at("margins");
  p.margin_initial = margin(m.at(0));
  p.margin_final = margin(m.at(1));
  if (!(p.margin_initial.d_zeta > 0.0 && p.margin_initial.d_sigma > 0.0 &&
        p.margin_final.d_zeta > 0.0 && p.margin_final.d_sigma > 0.0)) {
    bad("margins must be positive");
  }
  p.r = vec(j.at("disturbance"));
  p.step = j.value("step", 0.02);
  if (j.contains("lipschitz")) {
    const DisturbanceVector l = vec(j["lipschitz"]);
    p.lipschitz1 = l.dx;
    p.lipschitz2 = l.dvx;
  }
  p.grid = space(j.at("space"));
  if (j.contains("switch_x")) {
    const DisturbanceVector sx = vec(j["switch_x"]);
    p.switch_x = Interval{sx.dx, sx.dvx};
  }
  p.switch_cells = switch_cells_from_name(j.value("switch_cells", "center"));
  p.switch_band = j.value("switch_band", 1.0);
  return p;
}

json ows_to_json(const OwsProblem& p) {
  auto u = [](const ControlRange& c) { return json::array({c.lo, c.hi, c.step}); };
  json j = {
      {"initial", step_spec_to_json({p.params1, p.kf_initial, -1})},
      {"final", step_spec_to_json({p.params2, p.kf_final, -1})},
      {"controls", json::array({u(p.controls1), u(p.controls2)})},
      {"margins", json::array({pair(p.margin_initial.d_zeta, p.margin_initial.d_sigma),
                               pair(p.margin_final.d_zeta, p.margin_final.d_sigma)})},
      {"disturbance", pair(p.r.dx, p.r.dvx)},
      {"step", p.step},
      {"lipschitz", pair(p.lipschitz1, p.lipschitz2)},
      {"space", grid_to_json(p.grid)},
      {"switch_cells", p.switch_cells == OwsProblem::SwitchCells::kTouch ? "touch" : "center"},
      {"switch_band", p.switch_band},
  };
  if (p.switch_x) j["switch_x"] = pair(p.switch_x->lo, p.switch_x->hi);
  return j;
}

LibrarySettings library_from_json(const json& j) {
  LibrarySettings s;
  if (j.contains("space")) s.space = space(j["space"]);
  if (j.contains("disturbance")) s.r = vec(j["disturbance"]);
  s.step = j.value("step", s.step);
  if (j.contains("pad")) {
    const DisturbanceVector pad = vec(j["pad"]);
    s.pad_x = pad.dx;
    s.pad_v = pad.dvx;
  }
  s.switch_cells = switch_cells_from_name(j.value("switch_cells", "center"));
  s.switch_band = j.value("switch_band", 1.0);
  if (j.contains("patterns")) {
    s.initial_pattern = cell_pattern_from_name(j["patterns"].at(0).get<std::string>());
    s.final_pattern = cell_pattern_from_name(j["patterns"].at(1).get<std::string>());
  }
  if (j.contains("modes")) {
    for (const auto& [name, m] : j["modes"].items()) {
      ModeSettings& ms = s.modes[static_cast<int>(mode_from_name(name))];
      ms.omega = m.value("omega", ms.omega);
      if (m.contains("controls")) ms.controls = controls(m["controls"]);
      if (m.contains("margin")) ms.margin = margin(m["margin"]);
      if (!(ms.margin.d_zeta > 0.0 && ms.margin.d_sigma > 0.0)) bad("margins must be positive");
    }
  }
  return s;
}

json library_to_json(const LibrarySettings& s) {
  json modes = json::object();
  for (int i = 0; i < kNumModes; ++i) {
    const ModeSettings& m = s.modes[i];
    modes[std::string(mode_name(static_cast<ModeKind>(i)))] = {
        {"omega", m.omega},
        {"controls", {m.controls.lo, m.controls.hi, m.controls.step}},
        {"margin", pair(m.margin.d_zeta, m.margin.d_sigma)}};
  }
  auto pattern = [](CellPattern p) {
    return p == CellPattern::kCenter ? "center" : p == CellPattern::kCross ? "cross" : "block";
  };
  return {{"space", grid_to_json(s.space)},
          {"disturbance", pair(s.r.dx, s.r.dvx)},
          {"step", s.step},
          {"pad", pair(s.pad_x, s.pad_v)},
          {"switch_cells", s.switch_cells == OwsProblem::SwitchCells::kTouch ? "touch" : "center"},
          {"switch_band", s.switch_band},
          {"patterns", {pattern(s.initial_pattern), pattern(s.final_pattern)}},
          {"modes", modes}};
}

std::vector<double> doubles(const json& a) {
  std::vector<double> v;
  for (const json& x : a) v.push_back(x.get<double>());
  return v;
}

LevelTable table_from_json(const json& j) {
  LevelTable t;
  if (j.contains("velocity")) t.velocity_values = doubles(j["velocity"]);
  if (j.contains("step")) t.step_values = doubles(j["step"]);
  if (j.contains("swing_velocity")) t.swing_velocity_values = doubles(j["swing_velocity"]);
  if (j.contains("swing_step")) t.swing_step_values = doubles(j["swing_step"]);
  if (j.contains("hop_velocity")) t.hop_velocity_values = doubles(j["hop_velocity"]);
  return t;
}

json table_to_json(const LevelTable& t) {
  return {{"velocity", t.velocity_values},         {"step", t.step_values},
          {"swing_velocity", t.swing_velocity_values}, {"swing_step", t.swing_step_values},
          {"hop_velocity", t.hop_velocity_values}};
}

SimulationSettings sim_from_json(const json& j) {
  SimulationSettings s;
  s.sampler = sampler_kind_from_name(j.value("sampler", "uniform"));
  if (j.contains("r_sim")) s.r_sim = vec(j["r_sim"]);
  s.trials = j.value("trials", s.trials);
  s.seed = j.value("seed", s.seed);
  s.hold = j.value("hold", s.hold);
  s.max_holds = j.value("max_holds", s.max_holds);
  const std::string start = j.value("start", "winning");
  if (start == "keyframe") s.start = StartRule::kKeyframe;
  else if (start == "winning") s.start = StartRule::kWinning;
  else bad("unknown start rule " + start);
  s.open_loop = j.value("open_loop", false);
  const std::string sw = j.value("open_loop_switch", "phase");
  if (sw == "phase") s.open_loop_switch = OpenLoopSwitch::kPhase;
  else if (sw == "position") s.open_loop_switch = OpenLoopSwitch::kPosition;
  else bad("unknown open loop switch " + sw);
  for (const json& k : j.value("kicks", json::array())) {
    s.kicks.push_back({k.at("step").get<int>(), k.at("zeta").get<double>(),
                       k.value("dx", 0.0), k.value("dvx", 0.0)});
  }
  if (s.trials < 0 || s.max_holds <= 0 || !(s.hold > 0.0)) bad("bad simulation block");
  return s;
}

json sim_to_json(const SimulationSettings& s) {
  static constexpr const char* kSamplers[] = {"uniform", "worst_case", "vertex", "none"};
  json kicks = json::array();
  for (const Kick& k : s.kicks) {
    kicks.push_back({{"step", k.step}, {"zeta", k.zeta}, {"dx", k.dx}, {"dvx", k.dvx}});
  }
  return {{"sampler", kSamplers[static_cast<int>(s.sampler)]},
          {"r_sim", pair(s.r_sim.dx, s.r_sim.dvx)},
          {"trials", s.trials},
          {"seed", s.seed},
          {"hold", s.hold},
          {"max_holds", s.max_holds},
          {"start", s.start == StartRule::kKeyframe ? "keyframe" : "winning"},
          {"open_loop", s.open_loop},
          {"open_loop_switch", s.open_loop_switch == OpenLoopSwitch::kPhase ? "phase" : "position"},
          {"kicks", kicks}};
}

}  // namespace

std::string_view scenario_kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kOws: return "ows";
    case ScenarioKind::kSequence: return "sequence";
    case ScenarioKind::kReactive: return "reactive";
  }
  return "ows";
}

ExecConfig SimulationSettings::exec() const {
  ExecConfig c;
  c.hold = hold;
  c.max_holds = max_holds;
  c.kicks = kicks;
  c.open_loop_switch = open_loop_switch;
  return c;
}

PlannerConfig Scenario::planner_config() const {
  PlannerConfig c;
  c.exec = sim.exec();
  c.sampler = sim.sampler;
  c.r_sim = sim.r_sim;
  c.seed = sim.seed;
  c.table = table;
  c.dynamics = dynamics;
  return c;
}

StepSpec step_spec_from_json(const json& j, double default_omega) {
  StepSpec s;
  s.params.mode = mode_from_name(j.at("mode").get<std::string>());
  s.params.omega = j.value("omega", default_omega);
  const DisturbanceVector kf = vec(j.at("keyframe"));
  s.kf = {kf.dx, kf.dvx};
  s.params.contact_x = s.kf.contact_x;
  if (j.contains("contact")) {
    const json& c = j["contact"];
    s.contact = c.is_string() ? static_cast<int>(sys_action_from_name(c.get<std::string>()))
                              : c.get<int>();
  }
  return s;
}

json step_spec_to_json(const StepSpec& s) {
  json j = {{"mode", mode_name(s.params.mode)},
            {"omega", s.params.omega},
            {"keyframe", pair(s.kf.contact_x, s.kf.apex_vx)}};
  if (s.contact >= 0) j["contact"] = sys_action_name(static_cast<SysAction>(s.contact));
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  try {
    s.name = j.at("name").get<std::string>();
    s.description = j.value("description", "");
    const std::string kind = j.at("kind").get<std::string>();
    if (j.contains("simulation")) s.sim = sim_from_json(j["simulation"]);
    for (const json& l : j.value("levels", json::array())) s.levels.push_back(vec(l));
    if (j.contains("level_table")) s.table = table_from_json(j["level_table"]);
    if (kind == "ows") {
      s.kind = ScenarioKind::kOws;
      s.ows = ows_from_json(j.at("ows"));
    } else if (kind == "sequence") {
      s.kind = ScenarioKind::kSequence;
      s.library = library_from_json(j.at("library"));
      s.start = step_spec_from_json(j.at("start"), 3.0);
      for (const json& st : j.at("steps")) {
        const ModeKind m = mode_from_name(st.at("mode").get<std::string>());
        s.steps.push_back(step_spec_from_json(st, s.library.modes[static_cast<int>(m)].omega));
      }
      s.starts = j.value("starts", 1);
    } else if (kind == "reactive") {
      s.kind = ScenarioKind::kReactive;
      if (j.contains("library")) s.library = library_from_json(j["library"]);
      const json& script = j.at("script");
      if (script.is_string()) {
        if (script.get<std::string>() != "interactive") bad("script must be a list or \"interactive\"");
        s.interactive = true;
      } else {
        for (const json& e : script) {
          EnvEvent ev;
          if (e.is_string()) {
            ev.action = env_action_from_name(e.get<std::string>());
          } else {
            ev.action = env_action_from_name(e.at("action").get<std::string>());
            if (e.contains("abrupt_at")) ev.abrupt_at = e["abrupt_at"].get<double>();
          }
          s.script.push_back(ev);
        }
        if (s.script.empty()) bad("empty script");
      }
      s.idle_timeout = j.value("idle_timeout", s.idle_timeout);
      s.initial_env = env_action_from_name(j.value("initial_env", "e_md"));
      s.dynamics = j.value("dynamics", true);
    } else {
      bad("unknown kind " + kind);
    }
  } catch (const json::exception& e) {
    bad(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfiguration) throw;
    bad(e.what());
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j = {{"name", s.name},
            {"kind", scenario_kind_name(s.kind)},
            {"description", s.description},
            {"simulation", sim_to_json(s.sim)},
            {"level_table", table_to_json(s.table)}};
  if (!s.levels.empty()) {
    json l = json::array();
    for (const auto& d : s.levels) l.push_back(pair(d.dx, d.dvx));
    j["levels"] = l;
  }
  switch (s.kind) {
    case ScenarioKind::kOws: j["ows"] = ows_to_json(s.ows); break;
    case ScenarioKind::kSequence: {
      j["library"] = library_to_json(s.library);
      j["start"] = step_spec_to_json(s.start);
      json steps = json::array();
      for (const StepSpec& st : s.steps) steps.push_back(step_spec_to_json(st));
      j["steps"] = steps;
      j["starts"] = s.starts;
      break;
    }
    case ScenarioKind::kReactive: {
      j["library"] = library_to_json(s.library);
      if (s.interactive) {
        j["script"] = "interactive";
      } else {
        json script = json::array();
        for (const EnvEvent& e : s.script) {
          if (e.abrupt_at) {
            script.push_back({{"action", env_action_name(e.action)}, {"abrupt_at", *e.abrupt_at}});
          } else {
            script.push_back(env_action_name(e.action));
          }
        }
        j["script"] = script;
      }
      j["idle_timeout"] = s.idle_timeout;
      j["initial_env"] = env_action_name(s.initial_env);
      j["dynamics"] = s.dynamics;
      break;
    }
  }
  return j;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, path.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

std::filesystem::path resolve_scenario(const std::string& name) {
  namespace fs = std::filesystem;
  if (fs::exists(name)) return name;
  for (const fs::path& p : {fs::path(LTAMP_SCENARIO_DIR) / name,
                            fs::path(LTAMP_SCENARIO_DIR) / (name + ".json")}) {
    if (fs::exists(p)) return p;
  }
  throw Error(ErrorCode::kIo, "no scenario " + name);
}

}  // namespace ltamp
