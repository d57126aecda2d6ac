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

// Brute-force references shared by the unit tests and the acceptance
// harness.  Dynamics come from the oracles; only obstacle membership uses
// library types.

#ifndef CWHFMT_TESTS_REFERENCES_HPP
#define CWHFMT_TESTS_REFERENCES_HPP

#include "common.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace testutil {

// Force rows over moment rows (lever arm cross direction), one column per
// thruster, built directly from the layout.
inline Eigen::MatrixXd effectiveness(const ThrusterConfig& cfg) {
  Eigen::MatrixXd A(6, static_cast<Eigen::Index>(cfg.size()));
  for (std::size_t k = 0; k < cfg.size(); ++k) {
    const auto& t = cfg.thrusters[k];
    A.block<3, 1>(0, static_cast<Eigen::Index>(k)) = t.direction;
    A.block<3, 1>(3, static_cast<Eigen::Index>(k)) = t.position.cross(t.direction);
  }
  return A;
}

// Duration grid: 4096 points on (0, t_max], no refinement.
inline double duration_grid_cost(const State& x0, const State& xf, double t_max) {
  const auto a = oracle::cwh_matrix(kOmega);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 4096; ++k) {
    const double T = t_max * k / 4096.0;
    best = std::min(best, oracle::two_impulse_cost(oracle::expm(a, T), x0, xf));
  }
  return best;
}

// Coast-then-circularise cost on a 4096-point anomaly grid over one
// revolution, propagated with the RK45 oracle.  Grid points at or after the
// first one inside the KOZ are not admissible.
inline oracle::GridMin cam_grid(const State& x0, const Environment& env) {
  constexpr int kGrid = 4096;
  const double w = kOmega;
  const double rho = env.koz()->semi_axes(0);
  oracle::Rk45 rk(oracle::cwh_matrix(w), 1e-11, 1e-12);
  std::vector<Vec6> xs(kGrid);
  std::vector<bool> ok(kGrid);
  const double step = 2.0 * std::numbers::pi / w / (kGrid - 1);
  Vec6 x = x0;
  bool hit = false;
  for (int k = 0; k < kGrid; ++k) {
    if (k > 0) x = rk.integrate(x, step);
    hit = hit || env.koz()->contains(x.head<3>());
    xs[static_cast<std::size_t>(k)] = x;
    ok[static_cast<std::size_t>(k)] = !hit && std::abs(x(0)) > rho;
  }
  auto index = [&](double th) {
    return static_cast<std::size_t>(std::lround(th / (2.0 * std::numbers::pi) * (kGrid - 1)));
  };
  return oracle::grid_minimum(
      0.0, 2.0 * std::numbers::pi, kGrid,
      [&](double th) {
        const Vec6& s = xs[index(th)];
        return Vec3(-s(3), -1.5 * w * s(0) - s(4), -s(5)).norm();
      },
      [&](double th) { return static_cast<bool>(ok[index(th)]); });
}

}  // namespace testutil

#endif  // CWHFMT_TESTS_REFERENCES_HPP
