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

// Closed-loop execution of one walking step from a stored policy, with
// alternative-policy search when the state leaves the active winning set.

#ifndef LTAMP_EXECUTOR_HPP_
#define LTAMP_EXECUTOR_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ltamp/policy_store.hpp"

namespace ltamp {

// Independent uniform samples on [-r, r] per dimension.
class UniformDisturbance final : public DisturbanceSampler {
 public:
  UniformDisturbance(DisturbanceVector r, std::uint64_t seed);
  DisturbanceVector sample() override;

 private:
  DisturbanceVector r_;
  std::mt19937_64 rng_;
};

// The same vector every step.
class ConstantDisturbance final : public DisturbanceSampler {
 public:
  explicit ConstantDisturbance(DisturbanceVector d) : d_(d) {}
  DisturbanceVector sample() override { return d_; }

 private:
  DisturbanceVector d_;
};

// One vertex of the box, drawn per trial and held for the whole run.
class VertexDisturbance final : public DisturbanceSampler {
 public:
  VertexDisturbance(DisturbanceVector r, std::uint64_t seed);
  DisturbanceVector sample() override { return d_; }

 private:
  DisturbanceVector d_;
};

enum class SamplerKind { kUniform, kWorstCase, kVertex, kNone };

SamplerKind sampler_kind_from_name(std::string_view name);
std::unique_ptr<DisturbanceSampler> make_sampler(SamplerKind kind,
                                                 DisturbanceVector r,
                                                 std::uint64_t seed);

// Velocity/position jump applied once, at the first hold of walking step
// `step` whose elapsed phase reaches `zeta`.
struct Kick {
  int step = 0;
  double zeta = 0.0;
  double dx = 0.0;
  double dvx = 0.0;
};

// When the open-loop baseline changes template: at the planned phase or
// once the position passes the planned switch.
enum class OpenLoopSwitch { kPhase, kPosition };

struct ExecConfig {
  double hold = 0.02;
  int max_holds = 400;
  std::vector<Kick> kicks;
  OpenLoopSwitch open_loop_switch = OpenLoopSwitch::kPhase;
};

namespace flags {
inline constexpr std::uint32_t kStart = 1u << 0;
inline constexpr std::uint32_t kModeSwitch = 1u << 1;
inline constexpr std::uint32_t kPolicySwitch = 1u << 2;
inline constexpr std::uint32_t kKick = 1u << 3;
inline constexpr std::uint32_t kGoal = 1u << 4;
inline constexpr std::uint32_t kOutOfWin = 1u << 5;
inline constexpr std::uint32_t kAbrupt = 1u << 6;
inline constexpr std::uint32_t kFailed = 1u << 7;
inline constexpr std::uint32_t kOpenLoop = 1u << 8;
inline constexpr std::uint32_t kRejected = 1u << 9;
}  // namespace flags

// "start|mode_switch|..." for the set bits.
std::string flag_names(std::uint32_t bits);

struct LogRecord {
  int step = 0;
  // Phase elapsed within the step.
  double zeta = 0.0;
  double x = 0.0;
  double vx = 0.0;
  ModeKind mode = ModeKind::kPipm;
  int contact = -1;
  // Control held over the following interval; NaN on terminal records.
  double control = 0.0;
  DisturbanceVector disturbance;
  double sigma = 0.0;
  double zeta_riem = 0.0;
  std::uint32_t flags = 0;
};

enum class OutcomeKind { kReachedGoal, kSwitchedPolicy, kReplanned, kFailed };
enum class OutcomeReason {
  kNone,
  kOutOfWinningSet,
  kEnvironmentAbruptChange,
  kNoPolicy,
  kTimeout,
  kDivergence,
};

std::string_view outcome_name(OutcomeKind k);
std::string_view reason_name(OutcomeReason r);

struct StepOutcome {
  OutcomeKind kind = OutcomeKind::kFailed;
  OutcomeReason reason = OutcomeReason::kNone;
  // Policy active when the step ended; -1 for open loop.
  PolicyHandle handle = -1;
  // Alternatives taken during the step, in order.
  std::vector<PolicyHandle> switched;
  ComState state;
  int holds = 0;
  // 1 or 2 when the step ended.
  int phase = 1;

  // ReachedGoal after at least one policy switch.
  bool reached_after_switch() const {
    return kind == OutcomeKind::kReachedGoal && !switched.empty();
  }
};

struct StepSummary {
  int step = 0;
  std::string outcome;
  std::string reason;
  PolicyHandle handle = -1;
  int holds = 0;
  std::string keyframe;
  std::string contact;
  std::string mode;
  std::string env;
};

struct ExecutionLog {
  std::vector<LogRecord> records;
  std::vector<StepSummary> steps;

  void write_csv(std::ostream& out) const;
  nlohmann::json to_json() const;
};

inline constexpr std::string_view kLogCsvHeader =
    "step,zeta,x,vx,mode,contact,control,dx,dvx,sigma,zeta_riem,flags";

// Polled once per hold before the switch; true aborts the step.
using AbruptProbe = std::function<bool(int hold, double zeta)>;

struct StepContext {
  int step_index = 0;
  ExecutionLog* log = nullptr;
  AbruptProbe abrupt;
};

StepOutcome execute_ows(const PolicyStore& store, PolicyHandle handle,
                        ComState start, DisturbanceSampler& d,
                        const ExecConfig& cfg, const StepContext& ctx = {});

// Resolves the policy by key; a missing entry is Replanned(NoPolicy).
StepOutcome execute_ows(const PolicyStore& store, const PolicyKey& key,
                        ComState start, DisturbanceSampler& d,
                        const ExecConfig& cfg, const StepContext& ctx = {});

// Nominal controls with the switch at the planned phase; no policy.
StepOutcome execute_open_loop(const OwsPolicy& policy, ComState start,
                              DisturbanceSampler& d, const ExecConfig& cfg,
                              const StepContext& ctx = {});

}  // namespace ltamp

#endif  // LTAMP_EXECUTOR_HPP_
