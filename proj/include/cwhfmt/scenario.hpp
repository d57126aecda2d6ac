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

#ifndef CWHFMT_SCENARIO_HPP
#define CWHFMT_SCENARIO_HPP

#include "cwhfmt/allocation.hpp"
#include "cwhfmt/geometry.hpp"
#include "cwhfmt/planner.hpp"
#include "cwhfmt/reachability.hpp"
#include "cwhfmt/safety.hpp"
#include "cwhfmt/smoothing.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwhfmt {

/// Validation failure; `path()` names the offending field, e.g.
/// "koz.semi_axes_m".
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct WaypointSpec {
  State state = State::Zero();
  double eps_r = 0.0;
  double eps_v = 0.0;
  bool exact = false;
  std::optional<StateSpaceBox> sample_box;
};

struct PlannerConfig {
  std::size_t n = 400;
  double j_bar = 0.3;
  double t_max_frac = 0.1;
  double dt_frac = 0.0005;
  double goal_fraction = 0.04;
  bool merge_mode = true;
  bool strict_safety = false;
  int t_grid = 64;
  /// Half-width of the velocity sampling band; j_bar when unset.
  std::optional<double> velocity_margin_mps;
  double leg_margin_m = 60.0;
};

struct SmoothingConfig {
  bool enabled = true;
  double alpha_tol = 1.0 / 64.0;
  SmoothingMode mode = SmoothingMode::WholePlan;
};

struct Scenario {
  static constexpr int kFormatVersion = 1;

  std::string name;
  double omega = 1.0592e-3;
  std::optional<Vec3> koz_semi_axes;
  std::vector<ConeObstacle> antenna_lobes;
  double target_radius_m = 12.0;
  StateSpaceBox mission_box;
  double chaser_radius_m = 1.0;
  PlumeModel plume{10.0 * std::numbers::pi / 180.0, 16.0};
  /// Empty means the built-in 16-thruster layout.
  std::vector<Thruster> thrusters;
  int fault_tolerance = 2;
  CamPolicy cam_policy = CamPolicy::TurnBurnTurn;
  bool planar = true;
  State initial_state = State::Zero();
  std::vector<WaypointSpec> waypoints;
  PlannerConfig planner;
  SmoothingConfig smoothing;

  OrbitModel model() const { return OrbitModel(omega); }
  double dt() const;
  ThrusterConfig thruster_config() const;
  Environment environment() const;
  SafetyContext safety_context() const;
  ReachSpec reach_spec() const;
  PlannerOptions planner_options() const;
  /// Per-leg sampling specification; `n_per_leg` overrides planner.n.
  std::vector<LegSpec> leg_specs(std::optional<std::size_t> n_per_leg = {}) const;
  /// Derived sample box of leg i (ignores an explicit override).
  StateSpaceBox derived_leg_box(std::size_t i) const;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
/// Canonical JSON form (round-trips through parse_scenario).
nlohmann::json to_json(const Scenario& s);

/// FNV-1a 64 of the canonical JSON of every field that affects precompute.
std::uint64_t scenario_fingerprint(const Scenario& s);

std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace cwhfmt

#endif  // CWHFMT_SCENARIO_HPP
