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
#include "ltamp/session.hpp"

#include <algorithm>
#include <atomic>

#include "ltamp/encoding.hpp"
#include "ltamp/error.hpp"

namespace ltamp {

using nlohmann::json;

namespace {

std::string next_id() {
  static std::atomic<int> counter{0};
  return "session-" + std::to_string(++counter);
}

json pair(double a, double b) { return json::array({a, b}); }

json margin_json(const MarginSet& m) {
  const RiemCoord c = m.center();
  return {{"mode", mode_name(m.params().mode)},
          {"keyframe", pair(m.keyframe().contact_x, m.keyframe().apex_vx)},
          {"center", pair(c.zeta, c.sigma)},
          {"margin", pair(m.margin.d_zeta, m.margin.d_sigma)}};
}

}  // namespace

json protocol_error(const std::string& reason) {
  return {{"type", "error"}, {"reason", reason}};
}

json win_mask(const OwsPolicy& p, int limit) {
  const UniformGrid& g = p.grid();
  const int fx = std::max(1, (g.nx + limit - 1) / limit);
  const int fv = std::max(1, (g.nv + limit - 1) / limit);
  const int mx = (g.nx + fx - 1) / fx;
  const int mv = (g.nv + fv - 1) / fv;
  CellSet mask(static_cast<std::size_t>(mx * mv));
  for (int iv = 0; iv < g.nv; ++iv) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const int c = g.index(ix, iv);
      if (p.win1.test(c) || p.win2.test(c)) {
        mask.set(static_cast<std::size_t>((iv / fv) * mx + ix / fx));
      }
    }
  }
  return {{"nx", mx},
          {"nv", mv},
          {"x_min", g.x_min},
          {"v_min", g.v_min},
          {"eta_x", g.eta_x * fx},
          {"eta_v", g.eta_v * fv},
          {"bits", bitset_to_base64(mask)}};
}

Session::Session(const GameModel& game, const StrategyAutomaton& automaton,
                 Scenario scenario)
    : game_(game), automaton_(automaton), scenario_(std::move(scenario)), id_(next_id()) {
  if (scenario_.kind != ScenarioKind::kReactive) {
    throw Error(ErrorCode::kConfiguration, "sessions need a reactive scenario");
  }
  restart();
}

void Session::restart() {
  store_ = std::make_unique<PolicyStore>();
  library_ = std::make_unique<StepLibrary>(scenario_.library, *store_);
  planner_ = std::make_unique<ReactivePlanner>(game_, automaton_, library_.get(),
                                               scenario_.planner_config());
  const EnvAction first = scenario_.interactive || scenario_.script.empty()
                              ? scenario_.initial_env
                              : scenario_.script.front().action;
  planner_->reset(first);
  recording_ = {{first, {}}};
}

json Session::margins() const {
  const auto h = planner_->last_handle();
  if (!h) return nullptr;
  const OwsPolicy& p = store_->get(*h);
  return {{"initial", margin_json(p.geometry.initial_set)},
          {"final", margin_json(p.geometry.final_set)}};
}

json Session::state() const {
  const ReactivePlanner& pl = *planner_;
  const LocoState ls = pl.loco_state();
  json options = json::array();
  for (EnvAction e : pl.admissible()) options.push_back(env_action_name(e));
  json j = {{"type", "state"},
            {"session", id_},
            {"scenario", scenario_.name},
            {"step", static_cast<int>(pl.steps().size())},
            {"node", pl.node()},
            {"q", keyframe_name(ls.keyframe)},
            {"e", env_action_name(ls.env)},
            {"e_options", options},
            {"p", mode_name(ls.mode)},
            {"s", sys_action_name(ls.contact)},
            {"keyframe", pair(pl.origin().kf.contact_x, pl.origin().kf.apex_vx)},
            {"com", pair(pl.state().x, pl.state().vx)}};

  json poly = json::array();
  if (!pl.steps().empty() && pl.steps().back().executed) {
    const int last = pl.log().records.empty() ? -1 : pl.log().records.back().step;
    for (const LogRecord& r : pl.log().records) {
      if (r.step == last) poly.push_back(pair(r.x, r.vx));
    }
  }
  j["phase_polyline"] = poly;
  const auto h = pl.last_handle();
  j["win_mask"] = h ? win_mask(store_->get(*h)) : json(nullptr);
  j["margins"] = margins();
  if (!pl.steps().empty()) {
    const PlannerStep& st = pl.steps().back();
    j["outcome"] = {{"kind", outcome_name(st.outcome.kind)},
                    {"reason", reason_name(st.outcome.reason)},
                    {"holds", st.outcome.holds},
                    {"executed", st.executed}};
  }
  return j;
}

std::vector<json> Session::handle(const json& msg) {
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    return {protocol_error("message needs a string type")};
  }
  const std::string type = msg["type"].get<std::string>();
  if (type == "status") return {state()};
  if (type == "reset") {
    if (msg.contains("scenario")) {
      if (!msg["scenario"].is_string()) return {protocol_error("scenario must be a string")};
      try {
        Scenario s = load_scenario(resolve_scenario(msg["scenario"].get<std::string>()));
        if (s.kind != ScenarioKind::kReactive) return {protocol_error("not a reactive scenario")};
        scenario_ = std::move(s);
      } catch (const Error& e) {
        return {protocol_error(e.what())};
      }
    }
    restart();
    return {state()};
  }
  if (type == "env_action") {
    if (!msg.contains("action") || !msg["action"].is_string()) {
      return {protocol_error("env_action needs an action name")};
    }
    EnvAction a;
    try {
      a = env_action_from_name(msg["action"].get<std::string>());
    } catch (const Error& e) {
      return {protocol_error(e.what())};
    }
    recording_.push_back({a, {}});
    const PlannerStep st = planner_->advance({a, {}});
    if (!st.rejected.empty()) {
      const std::string reason =
          st.rejected == "inadmissible" ? st.rejected : "violates " + st.rejected;
      return {{{"type", "rejected"}, {"action", env_action_name(a)}, {"reason", reason}}};
    }
    return {state()};
  }
  return {protocol_error("unknown message type " + type)};
}

std::vector<json> Session::handle_text(const std::string& text) {
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::exception& e) {
    return {protocol_error(std::string("malformed json: ") + e.what())};
  }
  return handle(msg);
}

Scenario Session::recorded_scenario() const {
  Scenario s = scenario_;
  s.interactive = false;
  s.script = recording_;
  return s;
}

}  // namespace ltamp
