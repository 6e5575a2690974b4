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
// Interactive session: the client plays the environment, one action at a
// time, and receives the strategy's decision with the executed step.
//
// Client messages:
//   {"type": "env_action", "action": "e_md"}
//   {"type": "reset", "scenario": "interactive"}   (scenario optional)
//   {"type": "status"}
// Server messages:
//   {"type": "state", ...}          after reset, status and accepted actions
//   {"type": "rejected", "action", "reason": "violates S_e-1"}
//   {"type": "error", "reason"}     malformed or unknown messages

#ifndef LTAMP_SESSION_HPP_
#define LTAMP_SESSION_HPP_

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltamp/scenario.hpp"

namespace ltamp {

inline constexpr int kMaxMaskSide = 200;

// Union of both winning sets, max-pooled to at most `limit` cells a side.
// Rows run over velocity, bits over position, packed as base64.
nlohmann::json win_mask(const OwsPolicy& policy, int limit = kMaxMaskSide);

class Session {
 public:
  Session(const GameModel& game, const StrategyAutomaton& automaton, Scenario scenario);

  std::vector<nlohmann::json> handle(const nlohmann::json& msg);
  // Parse failures become protocol error replies.
  std::vector<nlohmann::json> handle_text(const std::string& text);

  nlohmann::json state() const;
  const std::string& id() const { return id_; }
  const Scenario& scenario() const { return scenario_; }
  const ReactivePlanner& planner() const { return *planner_; }
  // The initial action followed by every client action, rejected ones included.
  std::vector<EnvEvent> recording() const { return recording_; }
  // A reactive scenario that replays the session.
  Scenario recorded_scenario() const;

 private:
  void restart();
  nlohmann::json margins() const;

  const GameModel& game_;
  const StrategyAutomaton& automaton_;
  Scenario scenario_;
  std::string id_;
  std::unique_ptr<PolicyStore> store_;
  std::unique_ptr<StepLibrary> library_;
  std::unique_ptr<ReactivePlanner> planner_;
  std::vector<EnvEvent> recording_;
};

nlohmann::json protocol_error(const std::string& reason);

}  // namespace ltamp

#endif  // LTAMP_SESSION_HPP_
