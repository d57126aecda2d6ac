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
#include "oracles.hpp"
#include "references.hpp"

#include "cwhfmt/reachability.hpp"
#include "cwhfmt/sampling.hpp"
#include "cwhfmt/steering.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace cwhfmt;
using namespace testutil;

TEST_CASE("fixed-duration steering") {
  const OrbitModel m = leo();
  std::mt19937_64 rng(17);
  const double T = 0.05 * m.period();

  SUBCASE("coasting equilibrium needs no burns") {
    const State a = make_state(Vec3(0, -100, 0), Vec3::Zero());
    const State b = make_state(Vec3(0, -100, 0), Vec3::Zero());
    const auto sol = steer_fixed_T(m, a, b, T);
    CHECK(sol.cost == doctest::Approx(0.0));
  }
  SUBCASE("endpoints are reproduced") {
    for (int i = 0; i < 50; ++i) {
      const State x0 = random_state(rng, 500.0, 0.3);
      const State xf = random_state(rng, 500.0, 0.3);
      const auto sol = steer_fixed_T(m, x0, xf, T);
      CHECK((propagate_schedule(m, x0, sol.schedule(), T) - xf).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
  SUBCASE("planar endpoints give planar burns") {
    const State x0 = random_state(rng, 500.0, 0.3, true);
    const State xf = random_state(rng, 500.0, 0.3, true);
    const auto sol = steer_fixed_T(m, x0, xf, T);
    CHECK(sol.dv1.dv(2) == 0.0);
    CHECK(sol.dv2.dv(2) == 0.0);
  }
  SUBCASE("a full period is rejected as singular") {
    CHECK_THROWS_AS(steer_fixed_T(m, State::Zero(), State::Ones(), m.period()),
                    SingularDuration);
  }
}

TEST_CASE("optimal steering") {
  const OrbitModel m = leo();
  const auto lim = SteeringLimits::from_period_fraction(m, 0.1);

  SUBCASE("pure velocity change is an instantaneous burn") {
    const State a = make_state(Vec3(40, -200, 5), Vec3(0.01, 0.02, 0.0));
    State b = a;
    b.tail<3>() += Vec3(0.03, -0.04, 0.0);
    const auto sol = solve_2pbvp(m, a, b, lim);
    CHECK(sol.T == 0.0);
    CHECK(sol.dv1.dv.norm() == 0.0);
    CHECK((sol.dv2.dv - Vec3(0.03, -0.04, 0.0)).norm() < 1e-15);
    CHECK(sol.cost == doctest::Approx(0.05));
  }
  SUBCASE("identical states cost nothing") {
    const State a = make_state(Vec3(40, -200, 5), Vec3(0.01, 0.02, 0.0));
    CHECK(steering_cost(m, a, a, lim) == 0.0);
  }
  SUBCASE("cost is non-negative and generally asymmetric") {
    std::mt19937_64 rng(2);
    int asym = 0;
    for (int i = 0; i < 20; ++i) {
      const State a = random_state(rng, 300.0, 0.2);
      const State b = random_state(rng, 300.0, 0.2);
      const double ab = steering_cost(m, a, b, lim);
      const double ba = steering_cost(m, b, a, lim);
      CHECK(ab >= 0.0);
      CHECK(ba >= 0.0);
      asym += std::abs(ab - ba) > 1e-9 * std::max(ab, ba) ? 1 : 0;
    }
    CHECK(asym > 0);
  }
  SUBCASE("matches a dense duration grid on 100 pairs") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
      const State a = random_state(rng, 500.0, 0.3);
      const State b = random_state(rng, 500.0, 0.3);
      const double got = steering_cost(m, a, b, lim);
      const double ref = duration_grid_cost(a, b, lim.t_max);
      CHECK(std::abs(got - ref) <= 0.005 * ref);
    }
  }
  SUBCASE("cached kernel equals the direct solver") {
    SteeringKernel k(m, lim);
    std::mt19937_64 rng(29);
    for (int i = 0; i < 200; ++i) {
      const State a = random_state(rng, 300.0, 0.2);
      const State b = random_state(rng, 300.0, 0.2);
      const auto direct = solve_2pbvp(m, a, b, lim);
      const auto cached = k.solve(a, b);
      REQUIRE(cached.has_value());
      CHECK(cached->T == direct.T);
      CHECK(cached->cost == direct.cost);
      CHECK(cached->dv1.dv == direct.dv1.dv);
      CHECK(cached->dv2.dv == direct.dv2.dv);
    }
  }
  SUBCASE("per-burn cap") {
    SteeringLimits capped = lim;
    capped.dv_max = 1e-6;
    const State a = make_state(Vec3(-100, -200, 0), Vec3::Zero());
    const State b = make_state(Vec3(100, 0, 0), Vec3::Zero());
    CHECK_THROWS_AS(solve_2pbvp(m, a, b, capped), NoFeasibleSolution);
    CHECK(std::isinf(steering_cost(m, a, b, capped)));
  }
  SUBCASE("limits are validated") {
    SteeringLimits bad = lim;
    bad.t_max = -1.0;
    CHECK_THROWS_AS(bad.validate(m), std::invalid_argument);
  }
}

TEST_CASE("cost bounds hold on random pairs") {
  const OrbitModel m = leo();
  const auto lim = SteeringLimits::from_period_fraction(m, 0.1);
  std::mt19937_64 rng(31);
  int violations = 0;
  for (int i = 0; i < 500; ++i) {
    const State a = random_state(rng, 500.0, 0.3);
    const State b = random_state(rng, 500.0, 0.3);
    const auto sol = solve_2pbvp(m, a, b, lim);
    const double dv = sol.stacked().norm();
    const double slack = 1e-12 * dv;
    if (sol.cost < dv - slack || sol.cost > std::sqrt(2.0) * dv + slack) ++violations;
    const State end = propagate_schedule(m, a, sol.schedule(), sol.T);
    CHECK((end - b).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK(violations == 0);
}

TEST_CASE("gramian eigenvalue bounds") {
  const OrbitModel m = leo();
  const double t_max = 0.1 * m.period();
  const auto a = oracle::cwh_matrix(kOmega);
  const double m_min = fit_gramian_lower_constant(m, t_max, 1000);
  const double m_max = gramian_upper_bound(m, t_max);
  REQUIRE(m_min > 0.0);
  CHECK(dynamics_norm(m) == doctest::Approx(Eigen::JacobiSVD<Mat6>(a).singularValues()(0)));
  for (int k = 1; k <= 1000; ++k) {
    const double T = t_max * k / 1000.0;
    const Mat6 g = gramian(m, T);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * g.cwiseAbs().maxCoeff());
    // Independent construction from the exponential.
    Mat6 pv;
    pv.leftCols<3>() = oracle::expm(a, T).rightCols<3>();
    pv.rightCols<3>().setZero();
    pv.bottomRightCorner<3, 3>().setIdentity();
    const Eigen::SelfAdjointEigenSolver<Mat6> es(pv * pv.transpose());
    CHECK(es.eigenvalues()(0) >= m_min * T * T * (1.0 - 1e-9));
    CHECK(es.eigenvalues()(5) <= m_max);
  }
  // Small-T behaviour: lambda_min ~ T^2 / 2.
  const Eigen::SelfAdjointEigenSolver<Mat6> es(gramian(m, 0.01));
  CHECK(es.eigenvalues()(0) / 1e-4 == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("reachability ellipsoids bracket the steering cost") {
  const OrbitModel m = leo();
  const auto lim = SteeringLimits::from_period_fraction(m, 0.1);
  const double j_bar = 0.3;
  std::mt19937_64 rng(37);

  SUBCASE("coast point is inside") {
    const State x0 = random_state(rng, 200.0, 0.1);
    CHECK(reach_bounds_contains(m, x0, propagate_coast(m, x0, 300.0), 300.0, 1e-9) ==
          ReachClass::InsideInner);
  }

  SUBCASE("classification against fixed-duration costs") {
    int inner = 0;
    int outer = 0;
    for (int i = 0; i < 1000; ++i) {
      const State x0 = random_state(rng, 150.0, 0.15);
      const State xf = random_state(rng, 150.0, 0.15);
      const double T = uniform(rng, 0.02, 1.0) * lim.t_max;
      const double c = steer_fixed_T(m, x0, xf, T).cost;
      switch (reach_bounds_contains(m, x0, xf, T, j_bar)) {
        case ReachClass::InsideInner:
          ++inner;
          CHECK(c < j_bar);
          CHECK(steering_cost(m, x0, xf, lim) < j_bar);
          break;
        case ReachClass::OutsideOuter:
          ++outer;
          CHECK(c >= j_bar);
          break;
        case ReachClass::Annulus: break;
      }
    }
    CHECK(inner > 0);
    CHECK(outer > 0);
  }

  SUBCASE("outside at every grid duration implies an expensive pair") {
    SteeringKernel k(m, lim);
    int tested = 0;
    for (int i = 0; i < 300; ++i) {
      const State x0 = random_state(rng, 150.0, 0.15);
      const State xf = random_state(rng, 150.0, 0.15);
      bool all_out = true;
      for (double T : k.grid()) {
        all_out = all_out &&
                  reach_bounds_contains(m, x0, xf, T, 1.1 * j_bar) == ReachClass::OutsideOuter;
      }
      if (!all_out) continue;
      ++tested;
      CHECK(steering_cost(m, x0, xf, lim) >= j_bar);
    }
    CHECK(tested > 0);
  }

  SUBCASE("doubling j_bar doubles the ellipsoid axes") {
    const State x0 = random_state(rng, 150.0, 0.1);
    const double T = 400.0;
    const Vec6 dir = random_state(rng, 1.0, 1.0).normalized();
    // Largest s with x0's coast point + s dir inside the outer set.
    auto edge = [&](double j) {
      double lo = 0.0;
      double hi = 1e5;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const State xf = propagate_coast(m, x0, T) + mid * dir;
        (reach_bounds_contains(m, x0, xf, T, j) == ReachClass::OutsideOuter ? hi : lo) = mid;
      }
      return lo;
    };
    CHECK(edge(0.4) == doctest::Approx(2.0 * edge(0.2)).epsilon(1e-9));
  }
}

TEST_CASE("neighbor sets") {
  const OrbitModel m = leo();
  ReachSpec spec{0.3, SteeringLimits::from_period_fraction(m, 0.1)};
  SampleSpace space;
  space.box.lower << -200, -300, 0, -0.2, -0.2, 0;
  space.box.upper << 200, 100, 0, 0.2, 0.4, 0;
  std::vector<State> xs;
  for (std::uint64_t i = 1; i <= 100; ++i) xs.push_back(space.from_unit(halton(i, 4)));

  const auto ref = build_neighbor_sets(m, xs, spec, {false, 1.1, Exec::Serial});

  SUBCASE("matches all-pairs steering") {
    std::size_t expected = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (i == j) continue;
        const double c = steering_cost(m, xs[i], xs[j], spec.limits);
        const bool edge = std::any_of(ref.fwd[i].begin(), ref.fwd[i].end(), [&](std::uint32_t e) {
          return ref.edges[e].to == j;
        });
        CHECK(edge == (c < spec.j_bar));
        expected += c < spec.j_bar ? 1 : 0;
      }
    }
    CHECK(ref.edges.size() == expected);
    CHECK(expected > 0);
    for (const auto& e : ref.edges) CHECK(e.sol.cost < spec.j_bar);
  }
  SUBCASE("pruning and parallelism do not change the result") {
    CHECK(build_neighbor_sets(m, xs, spec, {true, 1.1, Exec::Serial}) == ref);
    CHECK(build_neighbor_sets(m, xs, spec, {true, 1.1, Exec::Parallel}) == ref);
    CHECK(build_neighbor_sets(m, xs, spec, {false, 1.1, Exec::Parallel}) == ref);
  }
  SUBCASE("vanishing threshold gives empty lists") {
    ReachSpec tiny = spec;
    tiny.j_bar = 1e-12;
    const auto nb = build_neighbor_sets(m, xs, tiny);
    CHECK(nb.edges.empty());
  }
  SUBCASE("duplicate samples are mutual zero-cost neighbors") {
    std::vector<State> two{xs[3], xs[3]};
    const auto nb = build_neighbor_sets(m, two, spec);
    REQUIRE(nb.edges.size() == 2);
    CHECK(nb.edges[0].sol.cost == 0.0);
    CHECK(nb.edges[1].sol.cost == 0.0);
  }
  SUBCASE("backward lists mirror forward lists") {
    NeighborSets copy = ref;
    copy.rebuild_backward();
    CHECK(copy == ref);
    for (std::size_t j = 0; j < ref.bwd.size(); ++j) {
      for (std::uint32_t e : ref.bwd[j]) CHECK(ref.edges[e].to == j);
    }
  }
}
