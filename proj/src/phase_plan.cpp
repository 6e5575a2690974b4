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

#include "ltamp/phase_plan.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ltamp/error.hpp"

namespace ltamp {
namespace {

constexpr double kScanStep = 1e-3;
constexpr double kPlanStep = 0.02;
constexpr double kPlanHorizon = 20.0;

std::size_t slot_index(Level l) { return static_cast<std::size_t>(l) + 1; }

double at(const std::vector<double>& values, std::size_t i) {
  if (i >= values.size()) {
    throw Error(ErrorCode::kIndex, "level outside the table");
  }
  return values[i];
}

bool valid_root(double x, double v2, Keyframe kf1, Keyframe kf2) {
  return v2 > 0.0 && x > kf1.contact_x && x < kf2.contact_x;
}

std::optional<ComState> closed_form_pipm(const TemplateParams& p1, Keyframe kf1,
                                         const TemplateParams& p2, Keyframe kf2) {
  const double w1 = p1.omega * p1.omega;
  const double w2 = p2.omega * p2.omega;
  const double c1 = kf1.contact_x;
  const double c2 = kf2.contact_x;
  // w1 (x - c1)^2 + v1^2 = w2 (x - c2)^2 + v2^2
  const double a = w1 - w2;
  const double b = -2.0 * w1 * c1 + 2.0 * w2 * c2;
  const double k = w1 * c1 * c1 - w2 * c2 * c2 + kf1.apex_vx * kf1.apex_vx -
                   kf2.apex_vx * kf2.apex_vx;
  std::vector<double> roots;
  if (a == 0.0) {
    if (b == 0.0) return std::nullopt;
    roots.push_back(-k / b);
  } else {
    const double disc = b * b - 4.0 * a * k;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    // Numerically stable pair.
    const double q = -0.5 * (b + std::copysign(sq, b));
    roots.push_back(q / a);
    if (q != 0.0) roots.push_back(k / q);
  }
  std::sort(roots.begin(), roots.end());
  for (double x : roots) {
    const double v2 = nominal_speed_sq(p1, kf1, x);
    if (valid_root(x, v2, kf1, kf2)) return ComState{x, std::sqrt(v2)};
  }
  return std::nullopt;
}

std::optional<ComState> root_finding(const TemplateParams& p1, Keyframe kf1,
                                     const TemplateParams& p2, Keyframe kf2) {
  const auto gap = [&](double x) {
    return nominal_speed_sq(p1, kf1, x) - nominal_speed_sq(p2, kf2, x);
  };
  const double c1 = kf1.contact_x;
  const double c2 = kf2.contact_x;
  const int n = std::max(1, static_cast<int>(std::ceil((c2 - c1) / kScanStep)));
  const double h = (c2 - c1) / n;

  double max_gap = 0.0;
  for (int i = 0; i <= n; ++i) max_gap = std::max(max_gap, std::abs(gap(c1 + i * h)));
  if (max_gap < 1e-12) {
    const double x = 0.5 * (c1 + c2);
    const double v2 = nominal_speed_sq(p1, kf1, x);
    if (v2 > 0.0) return ComState{x, std::sqrt(v2)};
    return std::nullopt;
  }

  double xa = c1;
  double ga = gap(xa);
  for (int i = 1; i <= n; ++i) {
    const double xb = c1 + i * h;
    const double gb = gap(xb);
    if (i > 1 && nominal_speed_sq(p1, kf1, xa) < 0.0) break;
    if (ga == 0.0 || (ga < 0.0) != (gb < 0.0)) {
      double lo = xa;
      double hi = xb;
      double glo = ga;
      if (ga != 0.0) {
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = gap(mid);
          if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
      }
      const double x = ga == 0.0 ? xa : 0.5 * (lo + hi);
      const double v2 = nominal_speed_sq(p1, kf1, x);
      if (valid_root(x, v2, kf1, kf2)) return ComState{x, std::sqrt(v2)};
    }
    xa = xb;
    ga = gb;
  }
  return std::nullopt;
}

// Phase time for the nominal flow from s0 to reach x_target.
double time_to_reach(const TemplateParams& params, ComState s0, double x_target) {
  constexpr double kTol = 1e-6;
  ComState s = s0;
  double t = 0.0;
  if (s.x >= x_target) return 0.0;
  while (t < kPlanHorizon) {
    const ComState next = rk4_step(params, s, kPlanStep);
    if (next.x >= x_target || next.vx <= 0.0) {
      // Bisect on the sub-step length.
      double lo = 0.0;
      double hi = kPlanStep;
      const bool turned = next.x < x_target;
      while (hi - lo > kTol) {
        const double mid = 0.5 * (lo + hi);
        const ComState m = rk4_step(params, s, mid);
        const bool past = turned ? m.vx <= 0.0 : m.x >= x_target;
        (past ? hi : lo) = mid;
      }
      if (turned && std::abs(rk4_step(params, s, hi).x - x_target) > 1e-6) {
        throw Error(ErrorCode::kInfeasibleStep,
                    "nominal flow stops before the target position");
      }
      return t + hi;
    }
    s = next;
    t += kPlanStep;
  }
  throw Error(ErrorCode::kInfeasibleStep, "nominal flow does not reach target");
}

}  // namespace

double nominal_speed_sq(const TemplateParams& params, Keyframe kf, double x) {
  const double va2 = kf.apex_vx * kf.apex_vx;
  const double u = x - kf.contact_x;
  const double w2 = params.omega * params.omega;
  switch (params.mode) {
    case ModeKind::kPipm: return va2 + w2 * u * u;
    case ModeKind::kPpm: return va2 - w2 * u * u;
    case ModeKind::kSlm:
    case ModeKind::kMcm:
    case ModeKind::kSm: return va2 + 2.0 * params.omega * u;
    case ModeKind::kHm: return va2;
  }
  return va2;
}

ComState contact_switch(const TemplateParams& params1, Keyframe kf1,
                        const TemplateParams& params2, Keyframe kf2,
                        SwitchMethod method) {
  if (kf2.contact_x == kf1.contact_x) {
    throw Error(ErrorCode::kDegeneratePlan, "identical contacts");
  }
  if (kf2.contact_x < kf1.contact_x) {
    throw Error(ErrorCode::kInfeasibleStep, "next contact behind current one");
  }
  const bool both_pipm =
      params1.mode == ModeKind::kPipm && params2.mode == ModeKind::kPipm;
  if (method == SwitchMethod::kClosedForm && !both_pipm) {
    throw Error(ErrorCode::kConfiguration,
                "closed-form switch needs two PIPM semi-steps");
  }
  const bool closed = method == SwitchMethod::kClosedForm ||
                      (method == SwitchMethod::kAuto && both_pipm);
  const std::optional<ComState> s =
      closed ? closed_form_pipm(params1, kf1, params2, kf2)
             : root_finding(params1, kf1, params2, kf2);
  if (!s) {
    throw Error(ErrorCode::kInfeasibleStep,
                "manifolds do not cross between the contacts");
  }
  return *s;
}

OwsPlan plan_ows(Keyframe kf1, Keyframe kf2, const TemplateParams& params1,
                 const TemplateParams& params2) {
  if (kf1.contact_x == kf2.contact_x) {
    throw Error(ErrorCode::kDegeneratePlan, "zero-length step");
  }
  OwsPlan plan{kf1, kf2, params1, params2, {}, 0.0, 0.0};
  plan.switch_state = contact_switch(params1, kf1, params2, kf2);
  plan.zeta_switch = time_to_reach(params1, kf1.state(), plan.switch_state.x);
  plan.zeta_final = time_to_reach(params2, plan.switch_state, kf2.contact_x);
  return plan;
}

std::vector<ComState> nominal_polyline(const OwsPlan& plan, double dt) {
  std::vector<ComState> pts;
  const auto sweep = [&](const TemplateParams& p, ComState s, double span) {
    for (double t = 0.0; t < span - 1e-12; t += dt) {
      pts.push_back(s);
      s = rk4_step(p, s, std::min(dt, span - t));
    }
    return s;
  };
  sweep(plan.params1, plan.kf_initial.state(), plan.zeta_switch);
  pts.push_back(
      sweep(plan.params2, plan.switch_state, plan.zeta_final));
  return pts;
}

bool is_ordinary(Behavior b) {
  return b == Behavior::kWalk || b == Behavior::kBrachiation;
}

int keyframe_index(KeyframeLevel level) {
  const int v = static_cast<int>(level.velocity);
  switch (level.behavior) {
    case Behavior::kWalk: return v * 3 + static_cast<int>(level.step);
    case Behavior::kBrachiation: return 9 + v * 3 + static_cast<int>(level.step);
    case Behavior::kStop: return 18 + v;
    case Behavior::kHop: return 21 + v;
    case Behavior::kSlide: return 24 + v;
  }
  return 0;
}

KeyframeLevel keyframe_level(int index) {
  if (index < 0 || index >= kNumKeyframeIds) {
    throw Error(ErrorCode::kIndex, "keyframe index " + std::to_string(index));
  }
  if (index < 18) {
    const Behavior b = index < 9 ? Behavior::kWalk : Behavior::kBrachiation;
    const int r = index % 9;
    return {b, static_cast<Level>(r / 3), static_cast<Level>(r % 3)};
  }
  const Behavior b = static_cast<Behavior>(2 + (index - 18) / 3);
  return {b, static_cast<Level>((index - 18) % 3), Level::kS};
}

std::string keyframe_name(int index) {
  static constexpr std::array<const char*, 5> kBehaviors = {
      "walk", "brachiation", "stop", "hop", "slide"};
  static constexpr std::array<const char*, 3> kLevels = {"s", "m", "l"};
  const KeyframeLevel l = keyframe_level(index);
  std::string name = kBehaviors[static_cast<std::size_t>(l.behavior)];
  name += '-';
  name += kLevels[static_cast<std::size_t>(l.velocity)];
  if (is_ordinary(l.behavior)) {
    name += '-';
    name += kLevels[static_cast<std::size_t>(l.step)];
  }
  return name;
}

int keyframe_from_name(std::string_view name) {
  for (int i = 0; i < kNumKeyframeIds; ++i) {
    if (keyframe_name(i) == name) return i;
  }
  throw Error(ErrorCode::kIndex, "unknown keyframe " + std::string(name));
}

Keyframe level_to_keyframe(KeyframeLevel level, const LevelTable& table,
                           double current_contact_x) {
  const std::size_t v = slot_index(level.velocity);
  const std::size_t k = slot_index(level.step);
  switch (level.behavior) {
    case Behavior::kWalk:
      return {current_contact_x + at(table.step_values, k),
              at(table.velocity_values, v)};
    case Behavior::kBrachiation:
      return {current_contact_x + at(table.swing_step_values, k - 1),
              at(table.swing_velocity_values, v - 1)};
    case Behavior::kStop:
      return {current_contact_x + at(table.step_values, v),
              at(table.velocity_values, 0)};
    case Behavior::kHop:
      return {current_contact_x + at(table.step_values, 4),
              at(table.hop_velocity_values, v - 1)};
    case Behavior::kSlide:
      return {current_contact_x + at(table.step_values, 2),
              at(table.velocity_values, v)};
  }
  return {};
}

}  // namespace ltamp
