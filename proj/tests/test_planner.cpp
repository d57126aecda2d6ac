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

#include "cwhfmt/planner.hpp"
#include "cwhfmt/sampling.hpp"

#include <doctest.h>

#include <cmath>

using namespace cwhfmt;
using namespace testutil;

namespace {

// No KOZ, no cones, target far outside the box.
SafetyContext open_ctx(const StateSpaceBox& box) {
  ObstacleSet raw;
  raw.box = box;
  raw.target = TargetSphere{12.0};
  const OrbitModel m = leo();
  return SafetyContext(m, Environment(raw, 1.0), ThrusterConfig::default_16(default_plume()), 0,
                       0.0005 * m.period(), CamPolicy::TurnBurnTurn);
}

StateSpaceBox toy_box() {
  StateSpaceBox b;
  b.lower << 100, -300, 0, -0.1, -0.4, 0;
  b.upper << 300, -100, 0, 0.1, -0.1, 0;
  return b;
}

State circular(double x, double y) { return make_state(Vec3(x, y, 0), Vec3(0, -1.5 * kOmega * x, 0)); }

}  // namespace

TEST_CASE("halton sequence") {
  const auto p1 = halton(1, 2);
  CHECK(p1[0] == 0.5);
  CHECK(p1[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(halton(2, 1)[0] == 0.25);
  CHECK(halton(3, 6) == halton(3, 6));

  SUBCASE("dispersion proxy shrinks with more points") {
    std::mt19937_64 rng(79);
    std::vector<std::array<double, 4>> probes(10000);
    for (auto& p : probes) {
      for (auto& c : p) c = uniform(rng, 0.0, 1.0);
    }
    auto dispersion = [&](int n) {
      double worst = 0.0;
      for (const auto& p : probes) {
        double best = 1e9;
        for (int i = 1; i <= n; ++i) {
          const auto h = halton(static_cast<std::uint64_t>(i), 4);
          double d = 0.0;
          for (int k = 0; k < 4; ++k) d += (h[static_cast<std::size_t>(k)] - p[static_cast<std::size_t>(k)]) *
                                           (h[static_cast<std::size_t>(k)] - p[static_cast<std::size_t>(k)]);
          best = std::min(best, d);
        }
        worst = std::max(worst, std::sqrt(best));
      }
      return worst;
    };
    const double d100 = dispersion(100);
    const double d300 = dispersion(300);
    const double d1000 = dispersion(1000);
    CHECK(d300 < d100);
    CHECK(d1000 < d300);
  }
}

TEST_CASE("sample_free") {
  SUBCASE("obstacle-free space accepts the raw sequence") {
    const auto ctx = open_ctx(toy_box());
    SampleSpace space{toy_box(), true};
    const auto set = sample_free(space, 50, ctx, GoalRegion{}, 0);
    REQUIRE(set.states.size() == 50);
    for (std::uint64_t i = 0; i < 50; ++i) {
      CHECK(set.states[i] == space.from_unit(halton(i + 1, 4)));
    }
    CHECK(set.draws == 50);
  }
  SUBCASE("a box inside the KOZ is exhausted") {
    const auto ctx = default_ctx(0);
    SampleSpace space;
    space.box.lower << -10, -10, 0, -0.01, -0.01, 0;
    space.box.upper << 10, 10, 0, 0.01, 0.01, 0;
    SamplingOptions opt;
    opt.window = 500;
    CHECK_THROWS_AS(sample_free(space, 10, ctx, GoalRegion{}, 0, opt), SamplingExhausted);
  }
  SUBCASE("goal samples lie in the goal region") {
    const auto ctx = open_ctx(toy_box());
    SampleSpace space{toy_box(), true};
    GoalRegion goal{circular(200, -200), 8.0, 0.05};
    const auto set = sample_free(space, 20, ctx, goal, 10);
    REQUIRE(set.states.size() == 30);
    for (std::size_t i = 20; i < 30; ++i) CHECK(goal.contains(set.states[i]));
  }
  SUBCASE("serial and parallel screening agree") {
    const auto ctx = default_ctx(2);
    SampleSpace space;
    space.box.lower << -300, -800, 0, -0.3, -0.3, 0;
    space.box.upper << 200, 200, 0, 0.3, 0.3, 0;
    SamplingOptions ser;
    ser.exec = Exec::Serial;
    SamplingOptions par;
    par.batch = 64;
    const auto a = sample_free(space, 60, ctx, GoalRegion{}, 0, ser);
    const auto b = sample_free(space, 60, ctx, GoalRegion{}, 0, par);
    CHECK(a.states == b.states);
    CHECK(a.draws == b.draws);
  }
}

TEST_CASE("junction merging") {
  CHECK(merge_junction(Impulse{Vec3(0.1, 0, 0), 5}, Impulse{Vec3(-0.1, 0, 0), 5}).dv.norm() == 0.0);
  const Impulse m = merge_junction(Impulse{Vec3(0.1, 0, 0), 5}, Impulse{Vec3(0, 0.1, 0), 5});
  CHECK(m.dv == Vec3(0.1, 0.1, 0));
  CHECK(m.dv.norm() == doctest::Approx(0.141421356).epsilon(1e-8));
  CHECK_THROWS_AS(merge_junction(Impulse{Vec3::Zero(), 1}, Impulse{Vec3::Zero(), 2}),
                  std::invalid_argument);
  std::mt19937_64 rng(83);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a = random_state(rng, 1, 1).head<3>();
    const Vec3 b = random_state(rng, 1, 1).head<3>();
    CHECK(merge_junction(Impulse{a, 0}, Impulse{b, 0}).dv.norm() <= a.norm() + b.norm());
  }
}

TEST_CASE("single-leg planning on a toy graph") {
  const OrbitModel m = leo();
  const auto ctx = open_ctx(toy_box());
  const ReachSpec reach{0.3, SteeringLimits::from_period_fraction(m, 0.1)};
  const State start = circular(150, -250);
  // On the start's along-track drift path, so the direct hop is cheap.
  const State goal_state = circular(152, -266);
  LegSpec spec;
  spec.space = SampleSpace{toy_box(), true};
  spec.goal = GoalRegion{goal_state, 0.0, 0.0};
  spec.n = 40;
  spec.exact = true;
  const LegData leg = precompute_leg(spec, ctx, reach);
  REQUIRE(leg.goal_index == 40);

  SUBCASE("start at the goal is an empty plan") {
    const auto r = fmt_plan(goal_state, Vec3::Zero(), 0, leg, ctx, reach, {false, false});
    CHECK(r.success);
    CHECK(r.edges.empty());
    CHECK(r.cost_to_come == 0.0);
  }
  SUBCASE("one cheap hop matches exhaustive search over short paths") {
    const auto r = fmt_plan(start, Vec3::Zero(), 0, leg, ctx, reach, {false, false});
    REQUIRE(r.success);
    const auto& xs = leg.samples.states;
    const double direct = steering_cost(m, start, goal_state, reach.limits);
    double best = direct;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (static_cast<std::int64_t>(k) == leg.goal_index) continue;
      const double a = steering_cost(m, start, xs[k], reach.limits);
      const double b = steering_cost(m, xs[k], goal_state, reach.limits);
      if (a < reach.j_bar && b < reach.j_bar) best = std::min(best, a + b);
    }
    REQUIRE(r.edges.size() == 1);
    CHECK(r.edges[0].to == leg.goal_index);
    CHECK(r.cost_to_come == doctest::Approx(direct).epsilon(1e-12));
    CHECK(r.cost_to_come == doctest::Approx(best).epsilon(1e-12));
  }
  SUBCASE("every stored edge is below the threshold") {
    for (const auto& e : leg.nbrs.edges) CHECK(e.sol.cost < reach.j_bar);
    CHECK(leg.samples.certificates.size() == leg.samples.states.size());
  }
}

TEST_CASE("a wall across the box blocks the leg") {
  const OrbitModel m = leo();
  ObstacleSet raw;
  raw.koz = EllipsoidKoz{Vec3(10, 400, 10)};
  raw.box = StateSpaceBox::positions(Vec3(-200, -300, -1), Vec3(200, 300, 1));
  raw.target = TargetSphere{12.0};
  const SafetyContext ctx(m, Environment(raw, 1.0), ThrusterConfig::default_16(default_plume()),
                          0, 0.0005 * m.period(), CamPolicy::TurnBurnTurn);
  const ReachSpec reach{0.05, SteeringLimits::from_period_fraction(m, 0.1)};
  LegSpec spec;
  spec.space.box = raw.box;
  spec.space.box.lower.tail<3>() << -0.2, -0.4, 0;
  spec.space.box.upper.tail<3>() << 0.2, 0.4, 0;
  spec.space.planar = true;
  spec.goal = GoalRegion{circular(100, 0), 0.0, 0.0};
  spec.n = 150;
  spec.exact = true;
  const LegData leg = precompute_leg(spec, ctx, reach);
  const auto r = fmt_plan(circular(-100, 0), Vec3::Zero(), 0, leg, ctx, reach, {true, false});
  CHECK_FALSE(r.success);
  CHECK(r.diagnostics.find("frontier exhausted") != std::string::npos);
}

TEST_CASE("burn assembly") {
  const OrbitModel m = leo();
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PlanEdge> edges;
    double t = 0.0;
    const State x0 = random_state(rng, 200, 0.1, true);
    State x = x0;
    for (int k = 0; k < 4; ++k) {
      const State y = random_state(rng, 200, 0.1, true);
      PlanEdge e;
      e.sol = steer_fixed_T(m, x, y, uniform(rng, 100, 500));
      e.t_start = t;
      t += e.sol.T;
      edges.push_back(e);
      x = y;
    }
    const auto merged = assemble_burns(edges, true);
    const auto plain = assemble_burns(edges, false);
    double cm = 0.0;
    double cp = 0.0;
    for (const auto& b : merged) cm += b.imp.dv.norm();
    for (const auto& b : plain) cp += b.imp.dv.norm();
    CHECK(cm <= cp + 1e-15);
    CHECK(merged.size() == 5);
    CHECK(plain.size() == 8);
    // Both schedules fly the same trajectory end to end.
    BurnSchedule sm;
    BurnSchedule sp;
    for (const auto& b : merged) sm.append(b.imp);
    for (const auto& b : plain) sp.append(b.imp);
    const State end = propagate_schedule(m, x0, sm, t);
    CHECK((end - propagate_schedule(m, x0, sp, t)).norm() < 1e-9);
    CHECK((end - x).norm() < 1e-7);
  }
}
