/*
 Copyright 2026 The cwhfmt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "common.hpp"
#include "references.hpp"

#include "cwhfmt/safety.hpp"

#include <doctest.h>

#include <cmath>

using namespace cwhfmt;
using namespace testutil;

TEST_CASE("invariant set membership") {
  const OrbitModel m = leo();
  const double rho = 36.0;
  const InvariantSetSpec spec{rho};
  CHECK(is_invariant(m, make_state(Vec3(2 * rho, 0, 0), Vec3(0, -3 * kOmega * rho, 0)), spec));
  CHECK_FALSE(
      is_invariant(m, make_state(Vec3(0.5 * rho, 0, 0), Vec3(0, -0.75 * kOmega * rho, 0)), spec));

  SUBCASE("invariant states keep their radial offset and avoid the KOZ") {
    const Environment env = default_env();
    const State x0 = make_state(Vec3(-1.2 * rho, 100, 0), Vec3(0, 1.8 * kOmega * rho, 0));
    REQUIRE(is_invariant(m, x0, spec));
    for (double t = 0; t <= 3 * m.period(); t += 5.0) {
      const State x = propagate_coast(m, x0, t);
      CHECK(std::abs(x(0) - x0(0)) < 1e-9);
      CHECK_FALSE(env.in_koz(x.head<3>()));
    }
  }
}

TEST_CASE("circularisation burn") {
  const OrbitModel m = leo();
  SUBCASE("already circular in-plane") {
    const State x = make_state(Vec3(80, 10, 0), Vec3(0, -1.5 * kOmega * 80, 0));
    CHECK(circularization_burn(m, x).dv.norm() < 1e-15);
  }
  SUBCASE("at rest in the rotating frame") {
    const State x = make_state(Vec3(60, 0, 0), Vec3::Zero());
    CHECK((circularization_burn(m, x).dv - Vec3(0, -1.5 * kOmega * 60, 0)).norm() < 1e-15);
  }
  SUBCASE("closed-form slope matches a numerical derivative") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 100; ++i) {
      const State x0 = random_state(rng, 200.0, 0.2);
      const double th = uniform(rng, 0.0, 6.0);
      const double h = 1e-5;
      const double num = (circularization_cost_sq(m, x0, th + h) -
                          circularization_cost_sq(m, x0, th - h)) / (2 * h);
      const double ana = circularization_cost_slope(m, x0, th);
      CHECK(std::abs(num - ana) <= 1e-6 * std::max(1e-6, std::abs(ana)) + 1e-12);
    }
  }
}

TEST_CASE("optimal CAM") {
  const OrbitModel m = leo();
  const Environment env = default_env();
  const double dt = 0.0005 * m.period();
  const double rho = env.koz()->semi_axes(0);

  SUBCASE("a state on a safe circular orbit needs no burn") {
    const State x = make_state(Vec3(100, -200, 0), Vec3(0, -150 * kOmega, 0));
    const auto cam = optimal_cam(m, x, env, dt);
    CHECK(cam.theta_star == 0.0);
    CHECK(cam.dv_circ.dv.norm() < 1e-15);
  }
  SUBCASE("inside the KOZ is rejected") {
    CHECK_THROWS_AS(optimal_cam(m, make_state(Vec3(5, 5, 0), Vec3::Zero()), env, dt),
                    UnsafeState);
  }
  SUBCASE("candidate set against an anomaly grid") {
    std::mt19937_64 rng(67);
    int compared = 0;
    int rejected = 0;
    int apsis = 0;
    while (compared < 200) {
      const bool planar = compared % 2 == 0;
      const State x = random_state(rng, 250.0, 0.25, planar);
      if (env.in_koz(x.head<3>())) continue;
      const auto ref = cam_grid(x, env);
      CamResult cam;
      try {
        cam = optimal_cam(m, x, env, dt);
      } catch (const UnsafeState&) {
        ++rejected;
        // Nothing on the grid may reach the invariant set either, up to
        // the one-step contact-time uncertainty.
        CHECK(ref.value == std::numeric_limits<double>::infinity());
        continue;
      }
      ++compared;
      const double got = cam.dv_circ.dv.norm();
      CHECK(got <= ref.value + ref.resolution);
      CHECK(std::abs(cam.pre_burn(0)) > rho);
      // Planar stationary optima burn at an apsis.
      const bool interior = cam.theta_star > 0.0 && cam.theta_star < cam.theta_max &&
                            std::abs(std::abs(cam.pre_burn(0)) - rho * (1 + 1e-6)) > 1e-6 * rho;
      if (planar && interior) {
        ++apsis;
        CHECK(std::abs(cam.pre_burn(3)) <= 1e-9 * std::max(1.0, cam.pre_burn.tail<3>().norm()));
      }
    }
    CHECK(apsis > 0);
    MESSAGE("rejected ", rejected, " of ", compared + rejected);
  }
}

TEST_CASE("certified aborts end on a KOZ-free orbit") {
  const auto ctx = default_ctx(2);
  std::mt19937_64 rng(71);
  int safe = 0;
  for (int i = 0; i < 300; ++i) {
    const State x = random_state(rng, 250.0, 0.25, i % 2 == 0);
    const auto cert = certify_state(ctx, x);
    if (!cert.safe) continue;
    ++safe;
    REQUIRE(cert.cam.has_value());
    int entries = 0;
    walk_trajectory(ctx.model, cert.cam->post_state, {}, 3 * ctx.model.period(), ctx.dt,
                    [&](double, const State& s) {
                      entries += ctx.env.in_koz(s.head<3>()) ? 1 : 0;
                      return true;
                    });
    CHECK(entries == 0);
    CHECK(cert.mode_ok.size() == 137);
    CHECK(cert.feasible_count() == 137);
  }
  CHECK(safe > 20);
}

TEST_CASE("fault-tolerant certification") {
  const double w = kOmega;
  SUBCASE("a distant circular state is safe with every thruster healthy") {
    const auto ctx = default_ctx(0);
    const State x = make_state(Vec3(150, -400, 0), Vec3(0, -225 * w, 0));
    const auto cert = certify_state(ctx, x);
    CHECK(cert.safe);
    CHECK(cert.mode_ok.size() == 1);
  }
  SUBCASE("inside the KOZ is unsafe for every tolerance") {
    for (int F : {0, 1, 2}) {
      const auto cert = certify_state(default_ctx(F), make_state(Vec3(1, 1, 0), Vec3::Zero()));
      CHECK_FALSE(cert.safe);
      CHECK(cert.reason == CamFailure::InsideKoz);
    }
  }
  SUBCASE("losing both thrusters of a pair defeats a nadir-hold abort") {
    // Out-of-plane motion makes the abort burn need an out-of-plane
    // component, which only one pair per sign can provide (body y = -dz).
    const State x = make_state(Vec3(150, -400, 30), Vec3(0.02, -225 * w, 0.04));
    const auto ctx0 = default_ctx(0, CamPolicy::NadirHold);
    const auto cert0 = certify_state(ctx0, x);
    REQUIRE(cert0.safe);
    const Vec3 dv = cert0.cam->dv_circ.dv;
    REQUIRE(std::abs(dv(2)) > 1e-4);
    const Vec3 body = attitude_policy(x) * dv;
    // Pair pushing along +y_b is thrusters 8, 9; along -y_b 10, 11.
    const std::size_t first = body(1) > 0.0 ? 8 : 10;
    const auto ctx2 = default_ctx(2, CamPolicy::NadirHold);
    const auto cert2 = certify_state(ctx2, x);
    CHECK_FALSE(cert2.safe);
    CHECK(cert2.reason == CamFailure::BurnUnallocatable);
    const auto& bad = ctx2.modes[cert2.first_failed_mode];
    CHECK_FALSE(bad[first]);
    CHECK_FALSE(bad[first + 1]);
    // Turn-burn-turn only needs one healthy thruster, so it survives.
    CHECK(certify_state(default_ctx(2), x).safe);
  }
  SUBCASE("passive aborts reject a pending burn") {
    const auto ctx = default_ctx(0, CamPolicy::Passive);
    const State x = make_state(Vec3(150, -400, 0), Vec3(0, -225 * w, 0));
    CHECK(certify_state(ctx, x).safe);
    CHECK_FALSE(certify_with_prefix(ctx, x, Vec3(0.01, 0, 0)).safe);
  }
  SUBCASE("extending a certificate equals certifying with the prefix") {
    const auto ctx = default_ctx(1, CamPolicy::NadirHold);
    std::mt19937_64 rng(73);
    for (int i = 0; i < 50; ++i) {
      const State x = random_state(rng, 250.0, 0.2, true);
      const Vec3 pre = random_state(rng, 0.05, 0.05, true).head<3>();
      State after = x;
      after.tail<3>() += pre;
      const auto a = certify_with_prefix(ctx, x, pre);
      const auto b = extend_with_prefix(ctx, certify_state(ctx, after), x, pre);
      if (ctx.env.in_koz(x.head<3>())) continue;
      CHECK(a.safe == b.safe);
      CHECK(a.mode_ok == b.mode_ok);
    }
  }
}
