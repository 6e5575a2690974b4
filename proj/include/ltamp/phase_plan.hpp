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

// Nominal one-walking-step planning between two keyframes.

#ifndef LTAMP_PHASE_PLAN_HPP_
#define LTAMP_PHASE_PLAN_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ltamp/templates.hpp"

namespace ltamp {

// Speed squared along the nominal manifold through `kf` at position x.
double nominal_speed_sq(const TemplateParams& params, Keyframe kf, double x);

enum class SwitchMethod { kAuto, kClosedForm, kRootFinding };

// Intersection of the two nominal manifolds between the contacts; the first
// crossing along the forward flow wins.
ComState contact_switch(const TemplateParams& params1, Keyframe kf1,
                        const TemplateParams& params2, Keyframe kf2,
                        SwitchMethod method = SwitchMethod::kAuto);

struct OwsPlan {
  Keyframe kf_initial;
  Keyframe kf_final;
  TemplateParams params1;
  TemplateParams params2;
  ComState switch_state;
  // Phase duration of the first semi-step, and of the second up to the
  // final keyframe.
  double zeta_switch = 0.0;
  double zeta_final = 0.0;
};

OwsPlan plan_ows(Keyframe kf1, Keyframe kf2, const TemplateParams& params1,
                 const TemplateParams& params2);

// Nominal states sampled every `dt` across both semi-steps.
std::vector<ComState> nominal_polyline(const OwsPlan& plan, double dt = 0.02);

enum class Behavior { kWalk, kBrachiation, kStop, kHop, kSlide };
enum class Level { kS, kM, kL };

struct KeyframeLevel {
  Behavior behavior = Behavior::kWalk;
  Level velocity = Level::kS;
  // Only meaningful for walk and brachiation.
  Level step = Level::kS;

  bool operator==(const KeyframeLevel&) const = default;
};

inline constexpr int kNumKeyframeIds = 27;

bool is_ordinary(Behavior b);
int keyframe_index(KeyframeLevel level);
KeyframeLevel keyframe_level(int index);
// "walk-s-m", "stop-l", ...
std::string keyframe_name(int index);
int keyframe_from_name(std::string_view name);

struct LevelTable {
  std::vector<double> velocity_values{0.0, 0.4, 0.6, 0.8, 1.7};
  std::vector<double> step_values{0.15, 0.5, 0.6, 0.7, 0.6};
  // Brachiation swings are faster and set their own spacing.
  std::vector<double> swing_velocity_values{1.5, 1.7, 1.9};
  std::vector<double> swing_step_values{0.5, 0.6, 0.7};
  // Flight apex speeds sit between walking and swinging.
  std::vector<double> hop_velocity_values{0.8, 1.0, 1.2};
};

Keyframe level_to_keyframe(KeyframeLevel level, const LevelTable& table,
                           double current_contact_x);

}  // namespace ltamp

#endif  // LTAMP_PHASE_PLAN_HPP_
