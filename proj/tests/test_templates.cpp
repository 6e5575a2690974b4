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

#include <cmath>
#include <random>

#include <doctest.h>

#include "ltamp/error.hpp"
#include "ltamp/templates.hpp"

using namespace ltamp;

namespace {

constexpr TemplateParams kPipm3{ModeKind::kPipm, 3.0, 0.0};
constexpr TemplateParams kPpm3{ModeKind::kPpm, 3.0, 0.0};

}  // namespace

TEST_CASE("vector field examples") {
  const ComDerivative a = vector_field(kPipm3, {0.0, 0.5});
  CHECK(a.dx == 0.5);
  CHECK(a.dvx == 0.0);
  CHECK(vector_field(kPipm3, {0.1, 0.5}).dvx == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(vector_field(kPpm3, {0.1, 0.5}).dvx == doctest::Approx(-0.9).epsilon(1e-12));
  CHECK(vector_field({ModeKind::kMcm, 2.0, 0.0}, {0.3, 0.5}).dvx == 2.0);
  CHECK(vector_field({ModeKind::kSm, -1.0, 0.0}, {0.3, 0.5}).dvx == -1.0);
  CHECK(vector_field({ModeKind::kHm, 7.0, 1.0}, {0.3, 0.5}).dvx == 0.0);
  CHECK_THROWS_AS(vector_field(kPipm3, {NAN, 0.5}), Error);
}

TEST_CASE("disturbance enters additively") {
  // Dyadic values keep the subtraction exact.
  const DisturbanceVector d{0.125, -0.375};
  for (int m = 0; m < kNumModes; ++m) {
    const TemplateParams p{static_cast<ModeKind>(m), 2.5, 0.25};
    const ComState s{0.5, 0.75};
    const ComDerivative a = vector_field(p, s, d);
    const ComDerivative b = vector_field(p, s);
    CHECK(a.dx - b.dx == d.dx);
    CHECK(a.dvx - b.dvx == d.dvx);
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const TemplateParams p{static_cast<ModeKind>(i % kNumModes), 2.0 + u(rng), u(rng)};
    const ComState s{u(rng), 1.0 + u(rng)};
    const DisturbanceVector dd{0.1 * u(rng), 0.2 * u(rng)};
    const ComDerivative a = vector_field(p, s, dd);
    const ComDerivative b = vector_field(p, s);
    CHECK(a.dx - b.dx == doctest::Approx(dd.dx).epsilon(1e-12));
    CHECK(a.dvx - b.dvx == doctest::Approx(dd.dvx).epsilon(1e-12));
  }
}

TEST_CASE("tangent manifold values") {
  CHECK(tangent_sigma(kPipm3, {0.0, 0.5}, {0.0, 0.5}) == 0.0);
  // (0.25 / 9) * (0.36 - 0.25 - 0.09)
  CHECK(tangent_sigma(kPipm3, {0.1, 0.6}, {0.0, 0.5}) ==
        doctest::Approx(5.5556e-4).epsilon(1e-4));
  // 2 * 2 * 0.1 - (0.81 - 0.25)
  CHECK(tangent_sigma({ModeKind::kMcm, 2.0, 0.2}, {0.3, 0.9}, {0.2, 0.5}) ==
        doctest::Approx(-0.16).epsilon(1e-12));
  CHECK(tangent_sigma({ModeKind::kHm, 0.0, 0.0}, {0.3, 0.9}, {0.0, 0.8}) ==
        doctest::Approx(0.1));
  CHECK_THROWS_AS(tangent_sigma({ModeKind::kPipm, 0.0, 0.0}, {0.1, 0.6}, {0.0, 0.5}),
                  Error);
}

TEST_CASE("sigma sign above the nominal speed") {
  const Keyframe kf{0.0, 0.5};
  for (double x : {-0.1, 0.0, 0.05, 0.1}) {
    const double vp = std::sqrt(0.25 + 9.0 * x * x);
    CHECK(tangent_sigma(kPipm3, {x, vp + 0.01}, kf) > 0.0);
    const double vq = std::sqrt(0.25 - 9.0 * x * x);
    CHECK(tangent_sigma(kPpm3, {x, vq + 0.01}, kf) < 0.0);
  }
}

TEST_CASE("cotangent manifold values") {
  CHECK(cotangent_zeta(kPipm3, {0.0, 0.7}, {0.05, 0.55}) == 0.0);
  // 1.2^4 * 2
  CHECK(cotangent_zeta({ModeKind::kPipm, 2.0, 0.0}, {0.2, 0.6}, {0.1, 0.5}) ==
        doctest::Approx(4.1472).epsilon(1e-12));
  CHECK(cotangent_zeta({ModeKind::kMcm, 2.0, 0.0}, {0.1, 0.5}, {0.0, 0.5}) ==
        doctest::Approx(-0.1).epsilon(1e-12));
  try {
    cotangent_zeta(kPipm3, {0.1, 0.6}, {0.0, 0.5});
    FAIL("expected a singular reference");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularReference);
  }
  try {
    cotangent_zeta(kPipm3, {0.1, -0.6}, {0.05, 0.5});
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomain);
  }
}

TEST_CASE("keyframe maps to the chart origin") {
  for (int m = 0; m < kNumModes; ++m) {
    const auto mode = static_cast<ModeKind>(m);
    for (double w : {2.0, 3.0, 4.0}) {
      for (double c : {0.0, 0.5, 2.0}) {
        for (double va : {0.4, 0.6, 1.29}) {
          const double omega = mode == ModeKind::kSm ? -w / 4.0 : w;
          const TemplateParams p{mode, omega, c};
          const RiemCoord rc = riem_map(p, {c, va}, {c, va});
          CHECK(rc.zeta == doctest::Approx(0.0));
          CHECK(rc.sigma == doctest::Approx(0.0));
        }
      }
    }
  }
  const RiemCoord on = riem_map(kPipm3, {0.0, 0.5}, {0.1, std::sqrt(0.34)});
  CHECK(std::abs(on.sigma) < 1e-12);
}

TEST_CASE("integration examples") {
  const ComState a = integrate(kPipm3, {0.0, 0.5}, 0.02);
  CHECK(std::abs(tangent_sigma(kPipm3, a, {0.0, 0.5})) < 1e-6);
  const ComState b = integrate({ModeKind::kHm, 0.0, 0.0}, {0.1, 0.8}, 0.1);
  CHECK(b.x == doctest::Approx(0.18).epsilon(1e-12));
  CHECK(b.vx == doctest::Approx(0.8).epsilon(1e-12));
  const ComState c = integrate({ModeKind::kSm, -1.0, 0.0}, {0.0, 1.0}, 0.5);
  CHECK(c.x == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(c.vx == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(integrate(kPipm3, {0.0, 0.5}, 0.0), Error);
  try {
    integrate({ModeKind::kPipm, 1e3, 0.0}, {1.0, 0.5}, 2.0);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDivergence);
  }
}

TEST_CASE("manifold conservation over one second") {
  struct Case {
    ModeKind mode;
    double omega;
    Keyframe kf;
  };
  std::vector<Case> cases;
  for (double w = 2.0; w <= 4.0 + 1e-9; w += 0.5) {
    cases.push_back({ModeKind::kPipm, w, {0.0, 0.5}});
    cases.push_back({ModeKind::kPipm, w, {2.6, 1.0}});
    cases.push_back({ModeKind::kPpm, w, {1.0, 1.29}});
  }
  for (double a : {-2.0, -1.0, 1.0, 2.0}) {
    cases.push_back({ModeKind::kMcm, a, {2.0, 1.432}});
    cases.push_back({ModeKind::kSm, -std::abs(a), {1.0, 1.2}});
    cases.push_back({ModeKind::kSlm, a, {1.0, 1.0}});
  }
  cases.push_back({ModeKind::kHm, 0.0, {0.5, 0.8}});
  for (const Case& cs : cases) {
    const TemplateParams p{cs.mode, cs.omega, cs.kf.contact_x};
    ComState s = cs.kf.state();
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      s = rk4_step(p, s, 0.02);
      worst = std::max(worst, std::abs(tangent_sigma(p, s, cs.kf)));
    }
    CAPTURE(mode_name(cs.mode));
    CAPTURE(cs.omega);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("chart range encloses and attains the sampled image") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int m = 0; m < kNumModes; ++m) {
    const auto mode = static_cast<ModeKind>(m);
    for (int trial = 0; trial < 30; ++trial) {
      const double c = u(rng);
      const TemplateParams p{mode, mode == ModeKind::kSm ? -1.0 : 2.0 + 2.0 * u(rng), c};
      const Keyframe kf{c, 0.4 + u(rng)};
      const RiemChart chart = make_chart(p, kf);
      const double x0 = c - 0.3 + 0.6 * u(rng);
      const double v0 = 0.3 + u(rng);
      const StateBox box{{x0, x0 + 0.05 * u(rng)}, {v0, v0 + 0.05 * u(rng)}};
      const RiemBox r = chart.range(box);
      double zlo = 1e300, zhi = -1e300, slo = 1e300, shi = -1e300;
      for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
          const ComState s{box.x.lo + (box.x.hi - box.x.lo) * i / 20.0,
                           box.vx.lo + (box.vx.hi - box.vx.lo) * j / 20.0};
          const RiemCoord rc = chart.map(s);
          zlo = std::min(zlo, rc.zeta);
          zhi = std::max(zhi, rc.zeta);
          slo = std::min(slo, rc.sigma);
          shi = std::max(shi, rc.sigma);
        }
      }
      const double tz = 1e-9 * (1.0 + std::abs(r.zeta.hi) + std::abs(r.zeta.lo));
      const double ts = 1e-9 * (1.0 + std::abs(r.sigma.hi) + std::abs(r.sigma.lo));
      CHECK(r.zeta.lo <= zlo + tz);
      CHECK(r.zeta.hi >= zhi - tz);
      CHECK(r.sigma.lo <= slo + ts);
      CHECK(r.sigma.hi >= shi - ts);
      // Extremes sit on the sampled lattice (corners or the contact line).
      const double span_z = r.zeta.hi - r.zeta.lo;
      const double span_s = r.sigma.hi - r.sigma.lo;
      CHECK(zlo - r.zeta.lo <= 0.05 * span_z + tz);
      CHECK(r.zeta.hi - zhi <= 0.05 * span_z + tz);
      CHECK(slo - r.sigma.lo <= 0.05 * span_s + ts);
      CHECK(r.sigma.hi - shi <= 0.05 * span_s + ts);
    }
  }
}

TEST_CASE("mode names round trip") {
  for (int m = 0; m < kNumModes; ++m) {
    const auto mode = static_cast<ModeKind>(m);
    CHECK(mode_from_name(mode_name(mode)) == mode);
  }
  CHECK_THROWS_AS(mode_from_name("LIPM"), Error);
}
