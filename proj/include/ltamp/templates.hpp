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

// Sagittal centre-of-mass template dynamics and their phase-space charts.
//
// Every template is affine in the state: xddot = k * x + m. The chart maps a
// state to (zeta, sigma): sigma measures the distance from the nominal
// phase-space curve through a keyframe and zeta the progression along it.

#ifndef LTAMP_TEMPLATES_HPP_
#define LTAMP_TEMPLATES_HPP_

#include <array>
#include <cstdint>
#include <string_view>

namespace ltamp {

enum class ModeKind : std::uint8_t { kPipm, kPpm, kSlm, kMcm, kHm, kSm };
inline constexpr int kNumModes = 6;

std::string_view mode_name(ModeKind mode);
ModeKind mode_from_name(std::string_view name);
// Modes whose acceleration does not depend on the position.
bool is_constant_accel(ModeKind mode);

struct TemplateParams {
  ModeKind mode = ModeKind::kPipm;
  // Pendulum frequency (rad/s) for PIPM/PPM, signed acceleration (m/s^2) for
  // SLM/MCM/SM, ignored for HM.
  double omega = 3.0;
  double contact_x = 0.0;

  TemplateParams with_omega(double w) const { return {mode, w, contact_x}; }
};

struct ComState {
  double x = 0.0;
  double vx = 0.0;
};

struct ComDerivative {
  double dx = 0.0;
  double dvx = 0.0;
};

// Additive disturbance on (xdot, xddot).
struct DisturbanceVector {
  double dx = 0.0;
  double dvx = 0.0;
};

struct RiemCoord {
  double zeta = 0.0;
  double sigma = 0.0;
};

struct Keyframe {
  double contact_x = 0.0;
  double apex_vx = 0.0;

  ComState state() const { return {contact_x, apex_vx}; }
  bool operator==(const Keyframe&) const = default;
};

// xddot = k * x + m for the nominal template.
struct AffineAccel {
  double k = 0.0;
  double m = 0.0;
};

AffineAccel affine_accel(const TemplateParams& params);

ComDerivative vector_field(const TemplateParams& params, ComState s,
                           DisturbanceVector d = {});

double tangent_sigma(const TemplateParams& params, ComState s, Keyframe kf);

// `ref` is the entry state for PIPM/PPM and the keyframe state otherwise.
double cotangent_zeta(const TemplateParams& params, ComState s, ComState ref);

// Cotangent reference used for a semi-step that starts at `kf`: one
// integration step along the nominal flow for PIPM/PPM, `kf` otherwise.
ComState entry_reference(const TemplateParams& params, Keyframe kf,
                         double step = 0.02);

RiemCoord riem_map(const TemplateParams& params, Keyframe kf, ComState s,
                   ComState ref);
RiemCoord riem_map(const TemplateParams& params, Keyframe kf, ComState s);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
  bool inside(const Interval& o) const { return o.lo <= lo && hi <= o.hi; }
};

struct StateBox {
  Interval x;
  Interval vx;
};

struct RiemBox {
  Interval zeta;
  Interval sigma;
};

// A chart fixes the template, the keyframe the manifold passes through and
// the cotangent reference.
struct RiemChart {
  TemplateParams params;
  Keyframe kf;
  ComState ref;

  RiemCoord map(ComState s) const;
  // Exact range of each coordinate over an axis-aligned box; both
  // coordinates are separable in x and vx for every template.
  RiemBox range(const StateBox& box) const;
};

RiemChart make_chart(const TemplateParams& params, Keyframe kf);
RiemChart make_chart(const TemplateParams& params, Keyframe kf, ComState ref);

class DisturbanceSampler {
 public:
  virtual ~DisturbanceSampler() = default;
  virtual DisturbanceVector sample() = 0;
};

class ZeroDisturbance final : public DisturbanceSampler {
 public:
  DisturbanceVector sample() override { return {}; }
};

// One classical RK4 step with the disturbance held constant.
ComState rk4_step(const TemplateParams& params, ComState s, double h,
                  DisturbanceVector d = {});

// Fixed-step RK4 over `dzeta`, one disturbance sample per step.
ComState integrate(const TemplateParams& params, ComState s0, double dzeta,
                   DisturbanceSampler& d, double step = 0.02);
ComState integrate(const TemplateParams& params, ComState s0, double dzeta,
                   double step = 0.02);

}  // namespace ltamp

#endif  // LTAMP_TEMPLATES_HPP_
