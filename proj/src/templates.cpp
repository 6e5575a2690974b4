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

#include "ltamp/templates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ltamp/error.hpp"

namespace ltamp {
namespace {

constexpr std::array<std::string_view, kNumModes> kModeNames = {
    "PIPM", "PPM", "SLM", "MCM", "HM", "SM"};

bool finite(ComState s) { return std::isfinite(s.x) && std::isfinite(s.vx); }

Interval add(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval shift(Interval a, double c) { return {a.lo + c, a.hi + c}; }

Interval scale(Interval a, double c) {
  return c >= 0.0 ? Interval{a.lo * c, a.hi * c} : Interval{a.hi * c, a.lo * c};
}

Interval mul(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval square(Interval a) {
  const double l = a.lo * a.lo;
  const double h = a.hi * a.hi;
  if (a.lo <= 0.0 && a.hi >= 0.0) return {0.0, std::max(l, h)};
  return {std::min(l, h), std::max(l, h)};
}

// f monotone over the interval.
template <typename F>
Interval monotone(Interval a, F f) {
  const double l = f(a.lo);
  const double h = f(a.hi);
  return {std::min(l, h), std::max(l, h)};
}

void require_positive_speed(double vx) {
  if (!(vx > 0.0)) {
    throw Error(ErrorCode::kDomain,
                "cotangent needs positive forward speed, got " +
                    std::to_string(vx));
  }
}

}  // namespace

std::string_view mode_name(ModeKind mode) {
  return kModeNames[static_cast<std::size_t>(mode)];
}

ModeKind mode_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return static_cast<ModeKind>(i);
  }
  throw Error(ErrorCode::kIndex, "unknown mode " + std::string(name));
}

bool is_constant_accel(ModeKind mode) {
  return mode != ModeKind::kPipm && mode != ModeKind::kPpm;
}

AffineAccel affine_accel(const TemplateParams& p) {
  const double w2 = p.omega * p.omega;
  switch (p.mode) {
    case ModeKind::kPipm: return {w2, -w2 * p.contact_x};
    case ModeKind::kPpm: return {-w2, w2 * p.contact_x};
    case ModeKind::kSlm:
    case ModeKind::kMcm:
    case ModeKind::kSm: return {0.0, p.omega};
    case ModeKind::kHm: return {0.0, 0.0};
  }
  return {};
}

ComDerivative vector_field(const TemplateParams& params, ComState s,
                           DisturbanceVector d) {
  if (!finite(s) || !std::isfinite(d.dx) || !std::isfinite(d.dvx)) {
    throw Error(ErrorCode::kInvalidState, "non-finite state");
  }
  const AffineAccel a = affine_accel(params);
  return {s.vx + d.dx, a.k * s.x + a.m + d.dvx};
}

double tangent_sigma(const TemplateParams& params, ComState s, Keyframe kf) {
  const double w2 = params.omega * params.omega;
  const double va2 = kf.apex_vx * kf.apex_vx;
  const double u = s.x - kf.contact_x;
  const double v2 = s.vx * s.vx;
  switch (params.mode) {
    case ModeKind::kPipm:
    case ModeKind::kPpm:
      if (w2 == 0.0) throw Error(ErrorCode::kDivision, "omega = 0");
      return params.mode == ModeKind::kPipm
                 ? (va2 / w2) * (v2 - va2 - w2 * u * u)
                 : -(va2 / w2) * (v2 - va2 + w2 * u * u);
    case ModeKind::kSlm:
    case ModeKind::kMcm:
    case ModeKind::kSm: return 2.0 * params.omega * u - (v2 - va2);
    case ModeKind::kHm: return s.vx - kf.apex_vx;
  }
  return 0.0;
}

double cotangent_zeta(const TemplateParams& params, ComState s, ComState ref) {
  const double c = params.contact_x;
  switch (params.mode) {
    case ModeKind::kPipm:
    case ModeKind::kPpm: {
      const double w2 = params.omega * params.omega;
      if (w2 == 0.0) throw Error(ErrorCode::kDivision, "omega = 0");
      if (ref.x == c) {
        throw Error(ErrorCode::kSingularReference,
                    "cotangent reference sits on the contact point");
      }
      require_positive_speed(s.vx);
      require_positive_speed(ref.vx);
      const double e = params.mode == ModeKind::kPipm ? w2 : -w2;
      return std::pow(s.vx / ref.vx, e) * (s.x - c) / (ref.x - c);
    }
    case ModeKind::kSlm:
    case ModeKind::kMcm:
    case ModeKind::kSm:
      // A stop keyframe has no speed to normalise by.
      if (ref.vx == 0.0) return -(s.x - c);
      require_positive_speed(s.vx);
      return params.omega * std::log(s.vx / ref.vx) - (s.x - c);
    case ModeKind::kHm: return s.x - ref.x;
  }
  return 0.0;
}

ComState entry_reference(const TemplateParams& params, Keyframe kf,
                         double step) {
  if (is_constant_accel(params.mode)) return kf.state();
  return rk4_step(params, kf.state(), step);
}

RiemCoord riem_map(const TemplateParams& params, Keyframe kf, ComState s,
                   ComState ref) {
  return {cotangent_zeta(params, s, ref), tangent_sigma(params, s, kf)};
}

RiemCoord riem_map(const TemplateParams& params, Keyframe kf, ComState s) {
  return riem_map(params, kf, s, entry_reference(params, kf));
}

RiemChart make_chart(const TemplateParams& params, Keyframe kf) {
  return {params, kf, entry_reference(params, kf)};
}

RiemChart make_chart(const TemplateParams& params, Keyframe kf, ComState ref) {
  return {params, kf, ref};
}

RiemCoord RiemChart::map(ComState s) const {
  return riem_map(params, kf, s, ref);
}

RiemBox RiemChart::range(const StateBox& box) const {
  const double w = params.omega;
  const double w2 = w * w;
  const double va = kf.apex_vx;
  const double va2 = va * va;
  const double c = params.contact_x;
  const Interval v2 = square(box.vx);
  const Interval u2 = square(shift(box.x, -kf.contact_x));

  RiemBox out;
  switch (params.mode) {
    case ModeKind::kPipm:
      out.sigma = scale(add(shift(v2, -va2), scale(u2, -w2)), va2 / w2);
      break;
    case ModeKind::kPpm:
      out.sigma = scale(add(shift(v2, -va2), scale(u2, w2)), -va2 / w2);
      break;
    case ModeKind::kSlm:
    case ModeKind::kMcm:
    case ModeKind::kSm:
      out.sigma = add(scale(shift(box.x, -kf.contact_x), 2.0 * w),
                      shift(scale(v2, -1.0), va2));
      break;
    case ModeKind::kHm: out.sigma = shift(box.vx, -va); break;
  }

  switch (params.mode) {
    case ModeKind::kPipm:
    case ModeKind::kPpm: {
      if (ref.x == c) {
        throw Error(ErrorCode::kSingularReference,
                    "cotangent reference sits on the contact point");
      }
      require_positive_speed(box.vx.lo);
      const double e = params.mode == ModeKind::kPipm ? w2 : -w2;
      const double rv = ref.vx;
      const Interval speed =
          monotone(box.vx, [&](double v) { return std::pow(v / rv, e); });
      out.zeta = mul(speed, scale(shift(box.x, -c), 1.0 / (ref.x - c)));
      break;
    }
    case ModeKind::kSlm:
    case ModeKind::kMcm:
    case ModeKind::kSm:
      if (ref.vx == 0.0) {
        out.zeta = scale(shift(box.x, -c), -1.0);
      } else {
        require_positive_speed(box.vx.lo);
        const double rv = ref.vx;
        out.zeta = add(
            monotone(box.vx, [&](double v) { return w * std::log(v / rv); }),
            scale(shift(box.x, -c), -1.0));
      }
      break;
    case ModeKind::kHm: out.zeta = shift(box.x, -ref.x); break;
  }
  return out;
}

ComState rk4_step(const TemplateParams& params, ComState s, double h,
                  DisturbanceVector d) {
  const AffineAccel a = affine_accel(params);
  auto f = [&](double x, double v) {
    return ComDerivative{v + d.dx, a.k * x + a.m + d.dvx};
  };
  const ComDerivative k1 = f(s.x, s.vx);
  const ComDerivative k2 = f(s.x + 0.5 * h * k1.dx, s.vx + 0.5 * h * k1.dvx);
  const ComDerivative k3 = f(s.x + 0.5 * h * k2.dx, s.vx + 0.5 * h * k2.dvx);
  const ComDerivative k4 = f(s.x + h * k3.dx, s.vx + h * k3.dvx);
  return {s.x + h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
          s.vx + h / 6.0 * (k1.dvx + 2.0 * k2.dvx + 2.0 * k3.dvx + k4.dvx)};
}

ComState integrate(const TemplateParams& params, ComState s0, double dzeta,
                   DisturbanceSampler& d, double step) {
  if (!(dzeta > 0.0) || !(step > 0.0)) {
    throw Error(ErrorCode::kConfiguration, "integration span must be positive");
  }
  if (!finite(s0)) throw Error(ErrorCode::kInvalidState, "non-finite state");
  const int n = std::max(1, static_cast<int>(std::ceil(dzeta / step - 1e-9)));
  const double h = dzeta / n;
  ComState s = s0;
  for (int i = 0; i < n; ++i) {
    s = rk4_step(params, s, h, d.sample());
    if (!finite(s)) throw Error(ErrorCode::kDivergence, "state diverged");
  }
  return s;
}

ComState integrate(const TemplateParams& params, ComState s0, double dzeta,
                   double step) {
  ZeroDisturbance none;
  return integrate(params, s0, dzeta, none, step);
}

}  // namespace ltamp
