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

#include "ltamp/executor.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "ltamp/error.hpp"

namespace ltamp {

UniformDisturbance::UniformDisturbance(DisturbanceVector r, std::uint64_t seed)
    : r_(r), rng_(seed) {}

DisturbanceVector UniformDisturbance::sample() {
  std::uniform_real_distribution<double> ux(-r_.dx, r_.dx);
  std::uniform_real_distribution<double> uv(-r_.dvx, r_.dvx);
  const double a = r_.dx > 0.0 ? ux(rng_) : 0.0;
  const double b = r_.dvx > 0.0 ? uv(rng_) : 0.0;
  return {a, b};
}

VertexDisturbance::VertexDisturbance(DisturbanceVector r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto bits = rng();
  d_ = {bits & 1u ? r.dx : -r.dx, bits & 2u ? r.dvx : -r.dvx};
}

SamplerKind sampler_kind_from_name(std::string_view name) {
  if (name == "uniform") return SamplerKind::kUniform;
  if (name == "worst_case") return SamplerKind::kWorstCase;
  if (name == "vertex") return SamplerKind::kVertex;
  if (name == "none") return SamplerKind::kNone;
  throw Error(ErrorCode::kConfiguration, "unknown sampler " + std::string(name));
}

std::unique_ptr<DisturbanceSampler> make_sampler(SamplerKind kind,
                                                 DisturbanceVector r,
                                                 std::uint64_t seed) {
  switch (kind) {
    case SamplerKind::kUniform: return std::make_unique<UniformDisturbance>(r, seed);
    case SamplerKind::kWorstCase: return std::make_unique<ConstantDisturbance>(r);
    case SamplerKind::kVertex: return std::make_unique<VertexDisturbance>(r, seed);
    case SamplerKind::kNone: return std::make_unique<ZeroDisturbance>();
  }
  return std::make_unique<ZeroDisturbance>();
}

std::string flag_names(std::uint32_t bits) {
  static constexpr const char* kNames[] = {
      "start", "mode_switch", "policy_switch", "kick", "goal",
      "out_of_win", "abrupt", "failed", "open_loop", "rejected"};
  std::string s;
  for (int i = 0; i < 10; ++i) {
    if (!(bits & (1u << i))) continue;
    if (!s.empty()) s += '|';
    s += kNames[i];
  }
  return s;
}

std::string_view outcome_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::kReachedGoal: return "ReachedGoal";
    case OutcomeKind::kSwitchedPolicy: return "SwitchedPolicy";
    case OutcomeKind::kReplanned: return "Replanned";
    case OutcomeKind::kFailed: return "Failed";
  }
  return "";
}

std::string_view reason_name(OutcomeReason r) {
  switch (r) {
    case OutcomeReason::kNone: return "";
    case OutcomeReason::kOutOfWinningSet: return "OutOfWinningSet";
    case OutcomeReason::kEnvironmentAbruptChange: return "EnvironmentAbruptChange";
    case OutcomeReason::kNoPolicy: return "NoPolicy";
    case OutcomeReason::kTimeout: return "Timeout";
    case OutcomeReason::kDivergence: return "Divergence";
  }
  return "";
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

double safe_zeta(const RiemChart& chart, ComState s) {
  try {
    return chart.map(s).zeta;
  } catch (const Error&) {
    return nan();
  }
}

double safe_sigma(const RiemChart& chart, ComState s) {
  try {
    return tangent_sigma(chart.params, s, chart.kf);
  } catch (const Error&) {
    return nan();
  }
}

bool finite(ComState s) { return std::isfinite(s.x) && std::isfinite(s.vx); }

bool safe_in_margin(const MarginSet& set, ComState s) {
  try {
    return in_margin(set, s);
  } catch (const Error&) {
    return false;
  }
}

// Shared bookkeeping of the closed and open loops.
class StepRun {
 public:
  StepRun(const ExecConfig& cfg, const StepContext& ctx, ComState start)
      : cfg_(cfg), ctx_(ctx), s_(start), kicked_(cfg.kicks.size(), false) {}

  ComState& state() { return s_; }
  int holds() const { return holds_; }
  double zeta() const { return holds_ * cfg_.hold; }

  void apply_kicks() {
    for (std::size_t i = 0; i < cfg_.kicks.size(); ++i) {
      const Kick& k = cfg_.kicks[i];
      if (k.step != ctx_.step_index || kicked_[i]) continue;
      if (zeta() + 1e-12 < k.zeta) continue;
      kicked_[i] = true;
      s_.x += k.dx;
      s_.vx += k.dvx;
      pending_ |= flags::kKick;
    }
  }

  void mark(std::uint32_t f) { pending_ |= f; }

  void record(const OwsPolicy& p, int phase, int contact, double control,
              DisturbanceVector d) {
    if (!ctx_.log) {
      pending_ = 0;
      return;
    }
    const MarginSet& set = phase == 1 ? p.geometry.initial_set : p.geometry.final_set;
    LogRecord r;
    r.step = ctx_.step_index;
    r.zeta = zeta();
    r.x = s_.x;
    r.vx = s_.vx;
    r.mode = set.params().mode;
    r.contact = contact;
    r.control = control;
    r.disturbance = d;
    r.sigma = safe_sigma(set.chart, s_);
    r.zeta_riem = safe_zeta(set.chart, s_);
    r.flags = pending_ | (holds_ == 0 ? flags::kStart : 0u);
    pending_ = 0;
    ctx_.log->records.push_back(r);
  }

  // One hold of the template with control u; false on divergence.
  bool advance(const TemplateParams& params, double u, DisturbanceVector d) {
    s_ = rk4_step(params.with_omega(u), s_, cfg_.hold, d);
    ++holds_;
    return finite(s_);
  }

 private:
  const ExecConfig& cfg_;
  const StepContext& ctx_;
  ComState s_;
  int holds_ = 0;
  std::uint32_t pending_ = 0;
  std::vector<bool> kicked_;
};

int contact_of(const OwsPolicy& p, int phase) {
  return phase == 1 ? p.key.contact1 : p.key.contact2;
}

}  // namespace

StepOutcome execute_ows(const PolicyStore& store, PolicyHandle handle,
                        ComState start, DisturbanceSampler& d,
                        const ExecConfig& cfg, const StepContext& ctx) {
  if (!(cfg.hold > 0.0) || cfg.max_holds <= 0) {
    throw Error(ErrorCode::kConfiguration, "hold and horizon must be positive");
  }
  StepOutcome out;
  out.handle = handle;
  const OwsPolicy* p = &store.get(handle);
  if (std::abs(p->problem.step - cfg.hold) > 1e-12) {
    throw Error(ErrorCode::kConfiguration, "hold time differs from the synthesis step");
  }
  StepRun run(cfg, ctx, start);
  int phase = 1;

  auto finish = [&](OutcomeKind kind, OutcomeReason reason, std::uint32_t f) {
    run.mark(f);
    run.record(*p, phase, contact_of(*p, phase), nan(), {});
    out.kind = kind;
    out.reason = reason;
    out.state = run.state();
    out.holds = run.holds();
    out.phase = phase;
    return out;
  };
  auto switch_to = [&](PolicyHandle h) {
    out.handle = h;
    out.switched.push_back(h);
    p = &store.get(h);
    run.mark(flags::kPolicySwitch);
  };

  while (true) {
    run.apply_kicks();
    const ComState s = run.state();
    if (!finite(s)) return finish(OutcomeKind::kFailed, OutcomeReason::kDivergence, flags::kFailed);
    double u = 0.0;
    if (phase == 1) {
      if (ctx.abrupt && ctx.abrupt(run.holds(), run.zeta())) {
        return finish(OutcomeKind::kReplanned, OutcomeReason::kEnvironmentAbruptChange,
                      flags::kAbrupt);
      }
      int c = p->cell_of(s);
      if (c < 0 || !p->switch_cells.test(c)) {
        if (!p->in_win(1, c)) {
          const auto alt = store.lookup(s, 1, p->key);
          if (alt.empty()) {
            return finish(OutcomeKind::kReplanned, OutcomeReason::kOutOfWinningSet,
                          flags::kOutOfWin);
          }
          switch_to(alt.front());
          c = p->cell_of(s);
        }
      }
      if (p->switch_cells.test(c)) {
        phase = 2;
        run.mark(flags::kModeSwitch);
      } else {
        u = p->controls1[p->chosen1[c]];
      }
    }
    if (phase == 2) {
      if (run.holds() > 0 && safe_in_margin(p->geometry.final_set, s)) {
        return finish(OutcomeKind::kReachedGoal, OutcomeReason::kNone, flags::kGoal);
      }
      int c = p->cell_of(s);
      if (!p->in_win(2, c)) {
        const auto alt = store.lookup(s, 2, p->key);
        if (alt.empty()) {
          return finish(OutcomeKind::kReplanned, OutcomeReason::kOutOfWinningSet,
                        flags::kOutOfWin);
        }
        switch_to(alt.front());
        c = p->cell_of(s);
        if (run.holds() > 0 && safe_in_margin(p->geometry.final_set, s)) {
          return finish(OutcomeKind::kReachedGoal, OutcomeReason::kNone, flags::kGoal);
        }
      }
      const int a = p->chosen2[c];
      u = a >= 0 ? p->controls2[a] : p->problem.params2.omega;
    }
    if (run.holds() >= cfg.max_holds) {
      return finish(OutcomeKind::kFailed, OutcomeReason::kTimeout, flags::kFailed);
    }
    const DisturbanceVector dv = d.sample();
    run.record(*p, phase, contact_of(*p, phase), u, dv);
    const TemplateParams& params = phase == 1 ? p->problem.params1 : p->problem.params2;
    if (!run.advance(params, u, dv)) {
      return finish(OutcomeKind::kFailed, OutcomeReason::kDivergence, flags::kFailed);
    }
  }
}

StepOutcome execute_ows(const PolicyStore& store, const PolicyKey& key,
                        ComState start, DisturbanceSampler& d,
                        const ExecConfig& cfg, const StepContext& ctx) {
  if (auto h = store.find(key)) return execute_ows(store, *h, start, d, cfg, ctx);
  StepOutcome out;
  out.kind = OutcomeKind::kReplanned;
  out.reason = OutcomeReason::kNoPolicy;
  out.state = start;
  return out;
}

StepOutcome execute_open_loop(const OwsPolicy& policy, ComState start,
                              DisturbanceSampler& d, const ExecConfig& cfg,
                              const StepContext& ctx) {
  StepOutcome out;
  StepRun run(cfg, ctx, start);
  const OwsPlan& plan = policy.geometry.plan;
  // Past twice the planned duration the step has missed its goal.
  const int limit = std::min(
      cfg.max_holds,
      static_cast<int>(std::ceil(2.0 * (plan.zeta_switch + plan.zeta_final) / cfg.hold)));
  int phase = 1;
  auto finish = [&](OutcomeKind kind, OutcomeReason reason, std::uint32_t f) {
    run.mark(f | flags::kOpenLoop);
    run.record(policy, phase, contact_of(policy, phase), nan(), {});
    out.kind = kind;
    out.reason = reason;
    out.state = run.state();
    out.holds = run.holds();
    out.phase = phase;
    return out;
  };
  while (true) {
    run.apply_kicks();
    const ComState s = run.state();
    if (!finite(s)) return finish(OutcomeKind::kFailed, OutcomeReason::kDivergence, flags::kFailed);
    const bool due = cfg.open_loop_switch == OpenLoopSwitch::kPhase
                         ? run.zeta() + 1e-12 >= plan.zeta_switch
                         : s.x >= plan.switch_state.x;
    if (phase == 1 && due) {
      phase = 2;
      run.mark(flags::kModeSwitch);
    }
    if (phase == 2 && run.holds() > 0 && safe_in_margin(policy.geometry.final_set, s)) {
      return finish(OutcomeKind::kReachedGoal, OutcomeReason::kNone, flags::kGoal);
    }
    if (run.holds() >= limit) {
      return finish(OutcomeKind::kFailed, OutcomeReason::kTimeout, flags::kFailed);
    }
    const TemplateParams& params = phase == 1 ? policy.problem.params1 : policy.problem.params2;
    const DisturbanceVector dv = d.sample();
    run.mark(flags::kOpenLoop);
    run.record(policy, phase, contact_of(policy, phase), params.omega, dv);
    if (!run.advance(params, params.omega, dv)) {
      return finish(OutcomeKind::kFailed, OutcomeReason::kDivergence, flags::kFailed);
    }
  }
}

void ExecutionLog::write_csv(std::ostream& out) const {
  out << kLogCsvHeader << '\n';
  for (const LogRecord& r : records) {
    out << r.step << ',' << num(r.zeta) << ',' << num(r.x) << ',' << num(r.vx) << ','
        << mode_name(r.mode) << ',' << r.contact << ',' << num(r.control) << ','
        << num(r.disturbance.dx) << ',' << num(r.disturbance.dvx) << ','
        << num(r.sigma) << ',' << num(r.zeta_riem) << ',' << flag_names(r.flags) << '\n';
  }
}

nlohmann::json ExecutionLog::to_json() const {
  using nlohmann::json;
  auto jnum = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json steps_j = json::array();
  for (const StepSummary& s : steps) {
    json samples = json::array();
    for (const LogRecord& r : records) {
      if (r.step != s.step) continue;
      samples.push_back({{"zeta", r.zeta}, {"x", r.x}, {"vx", r.vx},
                         {"mode", mode_name(r.mode)}, {"contact", r.contact},
                         {"control", jnum(r.control)},
                         {"disturbance", {r.disturbance.dx, r.disturbance.dvx}},
                         {"sigma", jnum(r.sigma)}, {"zeta_riem", jnum(r.zeta_riem)},
                         {"flags", flag_names(r.flags)}});
    }
    steps_j.push_back({{"step", s.step}, {"outcome", s.outcome}, {"reason", s.reason},
                       {"policy", s.handle}, {"holds", s.holds}, {"keyframe", s.keyframe},
                       {"contact", s.contact}, {"mode", s.mode}, {"env", s.env},
                       {"samples", samples}});
  }
  return {{"format", "ltamp-log"}, {"steps", steps_j}};
}

}  // namespace ltamp
