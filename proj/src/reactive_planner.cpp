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
#include "ltamp/reactive_planner.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "ltamp/error.hpp"

namespace ltamp {

std::array<ModeSettings, kNumModes> LibrarySettings::default_modes() {
  std::array<ModeSettings, kNumModes> m;
  m[static_cast<int>(ModeKind::kPipm)] = {3.0, {2.0, 4.0, 0.02}, {0.05, 0.002}};
  m[static_cast<int>(ModeKind::kPpm)] = {3.0, {2.0, 4.0, 0.02}, {0.05, 0.006}};
  m[static_cast<int>(ModeKind::kSlm)] = {-1.0, {-2.0, 0.0, 0.02}, {0.05, 0.15}};
  m[static_cast<int>(ModeKind::kMcm)] = {2.0, {1.0, 3.0, 0.02}, {0.05, 0.15}};
  m[static_cast<int>(ModeKind::kHm)] = {0.0, {0.0, 0.0, 1.0}, {0.05, 0.05}};
  m[static_cast<int>(ModeKind::kSm)] = {-0.5, {-1.5, 0.5, 0.02}, {0.05, 0.15}};
  return m;
}

StepLibrary::StepLibrary(LibrarySettings settings, PolicyStore& store)
    : settings_(std::move(settings)), store_(store) {}

OwsProblem StepLibrary::problem(const StepSpec& from, const StepSpec& to) const {
  const ModeSettings& m1 = settings_.modes[static_cast<int>(from.params.mode)];
  const ModeSettings& m2 = settings_.modes[static_cast<int>(to.params.mode)];
  OwsProblem p;
  p.kf_initial = from.kf;
  p.kf_final = to.kf;
  p.params1 = from.params;
  p.params2 = to.params;
  p.controls1 = m1.controls;
  p.controls2 = m2.controls;
  p.margin_initial = m1.margin;
  p.margin_final = m2.margin;
  p.r = settings_.r;
  p.step = settings_.step;
  p.switch_cells = settings_.switch_cells;
  p.switch_band = settings_.switch_band;
  const OwsPlan plan = plan_ows(p.kf_initial, p.kf_final, p.params1, p.params2);
  p.grid = local_grid(settings_.space, plan, settings_.pad_x, settings_.pad_v);
  return p;
}

const StepEntry& StepLibrary::entry(const StepSpec& from, const StepSpec& to) {
  OwsProblem p = problem(from, to);
  const std::string id = policy_key(p, {}, {}, from.contact, to.contact).id();
  if (auto it = entries_.find(id); it != entries_.end()) return it->second;

  const auto t0 = std::chrono::steady_clock::now();
  RftsOptions opt;
  opt.initial_pattern = settings_.initial_pattern;
  opt.final_pattern = settings_.final_pattern;
  StepEntry e{p, build_rfts(p, from.contact, to.contact, store_, opt), {}, 0.0};
  for (const RftsTransition& t : e.rfts.transitions) {
    if (t.initial == RiemCell{} && t.final == RiemCell{}) e.handle = t.action;
  }
  if (!e.handle && !e.rfts.transitions.empty()) {
    e.handle = e.rfts.transitions.front().action;
  }
  e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return entries_.emplace(id, std::move(e)).first->second;
}

namespace {

StepOutcome no_policy(ComState s) {
  StepOutcome o;
  o.kind = OutcomeKind::kReplanned;
  o.reason = OutcomeReason::kNoPolicy;
  o.state = s;
  return o;
}

std::uint64_t step_seed(std::uint64_t seed, int step) {
  return seed * 1000003u + static_cast<std::uint64_t>(step);
}

void push_marker(ExecutionLog& log, int step, ComState s, const StepSpec& at,
                 std::uint32_t bits) {
  LogRecord r;
  r.step = step;
  r.x = s.x;
  r.vx = s.vx;
  r.mode = at.params.mode;
  r.contact = at.contact;
  r.control = std::numeric_limits<double>::quiet_NaN();
  r.flags = bits;
  log.records.push_back(r);
}

}  // namespace

ReactivePlanner::ReactivePlanner(const GameModel& game,
                                 const StrategyAutomaton& automaton,
                                 StepLibrary* library, PlannerConfig config)
    : game_(game), automaton_(automaton), library_(library),
      config_(std::move(config)) {
  if (config_.dynamics && library_ == nullptr) {
    throw Error(ErrorCode::kConfiguration, "dynamics need a step library");
  }
}

StepSpec ReactivePlanner::spec_for(const LocoDecision& d) const {
  const Keyframe kf = level_to_keyframe(keyframe_level(d.keyframe), config_.table,
                                        origin_.kf.contact_x);
  const double omega = library_ ? library_->settings().modes[static_cast<int>(d.mode)].omega
                                : LibrarySettings::default_modes()[static_cast<int>(d.mode)].omega;
  return {{d.mode, omega, kf.contact_x}, kf, static_cast<int>(d.contact)};
}

LocoState ReactivePlanner::loco_state() const {
  if (node_ < 0) throw Error(ErrorCode::kConfiguration, "planner not started");
  return loco_state_of(automaton_, node_);
}

void ReactivePlanner::reset(EnvAction first) {
  const int node = automaton_.initial_for(static_cast<int>(first));
  if (node < 0) {
    throw Error(ErrorCode::kAssumptionViolation,
                "no initial state for " + std::string(env_action_name(first)));
  }
  node_ = node;
  step_index_ = 0;
  steps_.clear();
  log_ = {};
  last_handle_.reset();
  const LocoState ls = loco_state();
  const LocoDecision d{ls.keyframe, ls.contact, ls.mode};
  origin_ = spec_for(d);
  origin_.kf = {0.0, origin_.kf.apex_vx};
  origin_.params.contact_x = 0.0;
  state_ = origin_.kf.state();
  trace_ = {ls};
  push_marker(log_, 0, state_, origin_, flags::kStart);
}

std::vector<EnvAction> ReactivePlanner::admissible() const {
  std::vector<EnvAction> out;
  if (node_ < 0) return out;
  const LocoState now = loco_state();
  for (int e = 0; e < kNumEnvActions; ++e) {
    const auto a = static_cast<EnvAction>(e);
    if (automaton_.successor(node_, e) >= 0 && env_rule_violated(game_, now, a).empty()) {
      out.push_back(a);
    }
  }
  return out;
}

void ReactivePlanner::summarize(const PlannerStep& s) {
  StepSummary sum;
  sum.step = s.index;
  sum.env = std::string(env_action_name(s.env));
  if (!s.rejected.empty()) {
    sum.outcome = "Rejected";
    sum.reason = s.rejected;
  } else {
    sum.outcome = std::string(outcome_name(s.outcome.kind));
    sum.reason = std::string(reason_name(s.outcome.reason));
    sum.handle = s.outcome.handle;
    sum.holds = s.outcome.holds;
    sum.keyframe = keyframe_name(s.decision.keyframe);
    sum.contact = std::string(sys_action_name(s.decision.contact));
    sum.mode = std::string(mode_name(s.decision.mode));
  }
  log_.steps.push_back(sum);
}

PlannerStep ReactivePlanner::advance(const EnvEvent& e,
                                     std::optional<double> next_abrupt) {
  if (node_ < 0) throw Error(ErrorCode::kConfiguration, "planner not started");
  PlannerStep st;
  st.index = static_cast<int>(steps_.size());
  st.env = e.action;
  const std::string rule = env_rule_violated(game_, loco_state(), e.action);
  const int next = rule.empty() ? automaton_.successor(node_, static_cast<int>(e.action)) : -1;
  if (next < 0) {
    st.rejected = rule.empty() ? "inadmissible" : rule;
    st.node = node_;
    push_marker(log_, step_index_, state_, origin_, flags::kRejected);
    summarize(st);
    steps_.push_back(st);
    return st;
  }

  node_ = next;
  st.node = node_;
  const LocoState ls = loco_state();
  trace_.push_back(ls);
  st.decision = {ls.keyframe, ls.contact, ls.mode};
  const StepSpec target = spec_for(st.decision);
  st.target = target.kf;

  if (!config_.dynamics) {
    st.outcome.kind = OutcomeKind::kReachedGoal;
    st.outcome.state = target.kf.state();
    origin_ = target;
    state_ = target.kf.state();
    summarize(st);
    steps_.push_back(st);
    return st;
  }

  st.executed = true;
  std::optional<PolicyHandle> handle;
  try {
    handle = library_->entry(origin_, target).handle;
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kInfeasibleStep &&
        err.code() != ErrorCode::kDegeneratePlan &&
        err.code() != ErrorCode::kDomain &&
        err.code() != ErrorCode::kSingularReference) {
      throw;
    }
  }
  if (!handle) {
    st.outcome = no_policy(state_);
    push_marker(log_, step_index_, state_, origin_, flags::kOutOfWin);
  } else {
    auto sampler = make_sampler(config_.sampler, config_.r_sim,
                                step_seed(config_.seed, step_index_));
    StepContext ctx{step_index_, &log_, {}};
    if (next_abrupt) {
      const double at = *next_abrupt;
      ctx.abrupt = [at](int, double zeta) { return zeta >= at; };
    }
    st.outcome = execute_ows(library_->store(), *handle, state_, *sampler,
                             config_.exec, ctx);
    last_handle_ = st.outcome.handle >= 0 ? st.outcome.handle : *handle;
    state_ = st.outcome.state;
    if (st.outcome.kind == OutcomeKind::kReachedGoal) origin_ = target;
  }
  ++step_index_;
  summarize(st);
  steps_.push_back(st);
  return st;
}

void ReactivePlanner::run(const std::vector<EnvEvent>& script) {
  if (script.empty()) throw Error(ErrorCode::kConfiguration, "empty script");
  reset(script.front().action);
  for (std::size_t i = 1; i < script.size(); ++i) {
    std::optional<double> abrupt;
    if (i + 1 < script.size()) abrupt = script[i + 1].abrupt_at;
    advance(script[i], abrupt);
  }
}

ScriptedRun run_step_sequence(StepLibrary& library, const StepSpec& start_spec,
                              ComState start, const std::vector<StepSpec>& steps,
                              const PlannerConfig& config) {
  ScriptedRun run;
  StepSpec origin = start_spec;
  ComState s = start;
  push_marker(run.log, 0, s, origin, flags::kStart);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const int idx = static_cast<int>(k);
    StepOutcome o;
    std::optional<PolicyHandle> handle;
    try {
      handle = library.entry(origin, steps[k]).handle;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kInfeasibleStep &&
          err.code() != ErrorCode::kDegeneratePlan) {
        throw;
      }
    }
    if (!handle) {
      o = no_policy(s);
    } else {
      auto sampler = make_sampler(config.sampler, config.r_sim, step_seed(config.seed, idx));
      o = execute_ows(library.store(), *handle, s, *sampler, config.exec,
                      {idx, &run.log, {}});
    }
    StepSummary sum;
    sum.step = idx;
    sum.outcome = std::string(outcome_name(o.kind));
    sum.reason = std::string(reason_name(o.reason));
    sum.handle = o.handle;
    sum.holds = o.holds;
    sum.mode = std::string(mode_name(steps[k].params.mode));
    run.log.steps.push_back(sum);
    run.outcomes.push_back(o);
    if (o.kind != OutcomeKind::kReachedGoal) break;
    ++run.completed;
    s = o.state;
    origin = steps[k];
  }
  return run;
}

}  // namespace ltamp
