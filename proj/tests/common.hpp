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

#ifndef CWHFMT_TESTS_COMMON_HPP
#define CWHFMT_TESTS_COMMON_HPP

#include "cwhfmt/allocation.hpp"
#include "cwhfmt/geometry.hpp"
#include "cwhfmt/safety.hpp"

#include <numbers>
#include <random>
#include <string>

namespace testutil {

using namespace cwhfmt;

// Mean motion of a 705 km circular orbit.
inline constexpr double kOmega = 1.0592e-3;

inline OrbitModel leo() { return OrbitModel(kOmega); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline State random_state(std::mt19937_64& rng, double r, double v, bool planar = false) {
  State x;
  for (int i = 0; i < 3; ++i) x(i) = uniform(rng, -r, r);
  for (int i = 3; i < 6; ++i) x(i) = uniform(rng, -v, v);
  if (planar) x(2) = x(5) = 0.0;
  return x;
}

inline double deg(double d) { return d * std::numbers::pi / 180.0; }

inline PlumeModel default_plume() { return PlumeModel{deg(10.0), 16.0}; }

/// KOZ and nadir antenna lobe of the default scenario, 1 m chaser.
inline Environment default_env() {
  ObstacleSet raw;
  raw.koz = EllipsoidKoz{Vec3(35.0, 50.0, 15.0)};
  raw.cones.push_back(ConeObstacle{Vec3::Zero(), -Vec3::UnitX(), deg(30.0), 75.0});
  raw.target = TargetSphere{12.0};
  raw.box = StateSpaceBox::positions(Vec3(-300, -800, -100), Vec3(200, 200, 100));
  return Environment(raw, 1.0);
}

inline SafetyContext default_ctx(int F, CamPolicy policy = CamPolicy::TurnBurnTurn) {
  const OrbitModel m = leo();
  return SafetyContext(m, default_env(), ThrusterConfig::default_16(default_plume()), F,
                       0.0005 * m.period(), policy);
}

inline std::string source_path(const std::string& rel) {
  return std::string(CWHFMT_SOURCE_DIR) + "/" + rel;
}

}  // namespace testutil

#endif  // CWHFMT_TESTS_COMMON_HPP
