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

#ifndef CWHFMT_ALLOCATION_HPP
#define CWHFMT_ALLOCATION_HPP

#include "cwhfmt/cwh.hpp"
#include "cwhfmt/geometry.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cwhfmt {

/// Body-frame thruster.  `direction` is the impulse the thruster imparts on
/// the chaser; its plume exhausts along -direction.
struct Thruster {
  Vec3 position = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();
  double dv_min = 0.0;
  double dv_max = std::numeric_limits<double>::infinity();
};

struct ThrusterConfig {
  std::vector<Thruster> thrusters;
  PlumeModel plume;

  std::size_t size() const { return thrusters.size(); }
  /// Throws std::invalid_argument on non-unit directions or bad bounds.
  void validate() const;

  /**
   * @brief 16 thrusters on a 1 m cube, as 8 torque-free pairs.
   *
   * Two pairs fire along each of +-x_b (in-track), one pair along each of
   * +-y_b and +-z_b.  Thrusters of a pair sit on the same face at
   * point-symmetric offsets, so equal firing cancels the moment.
   */
  static ThrusterConfig default_16(const PlumeModel& plume);
};

/// eta_k: true when thruster k is available.
using FailureMask = std::vector<bool>;

struct AllocationResult {
  Eigen::VectorXd magnitudes;
  double fuel = 0.0;
};

class AllocationInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * @brief LVLH -> body rotation of the nadir-pointing attitude.
 *
 * Body x is in-track (+dy), body z is nadir (-dx) and body y completes the
 * right-handed triad (-dz).  The map does not depend on the state.
 */
Mat3 attitude_policy(const State& x);

/// Minimum sum of magnitudes realising `dv_net_body` and `moment_net`.
/// Throws AllocationInfeasible.
AllocationResult allocate(const Vec3& dv_net_body, const Vec3& moment_net,
                          const ThrusterConfig& config, const FailureMask& mask);

/// allocate() returning nullopt instead of throwing.
std::optional<AllocationResult> try_allocate(const Vec3& dv_net_body,
                                             const Vec3& moment_net,
                                             const ThrusterConfig& config,
                                             const FailureMask& mask);

/// All masks with at most F failures: by failure count, then
/// lexicographically by failed indices.
std::vector<FailureMask> enumerate_failure_modes(int K, int F);

/// sum_{f<=F} C(K, f).
std::size_t failure_mode_count(int K, int F);

FailureMask all_healthy(std::size_t K);

/**
 * @brief True when no firing thruster's plume reaches the target sphere.
 *
 * `r` is the chaser position (LVLH), `R` the LVLH -> body rotation.
 */
bool plumes_clear(const Vec3& r, const Mat3& R, const ThrusterConfig& config,
                  const AllocationResult& alloc, const Environment& env);

/**
 * @brief Nominal torque-free burn in the nadir attitude with plume check.
 *
 * Returns the allocation when the burn is realisable by `mask` and no plume
 * impinges; nullopt otherwise.  A zero burn is always feasible.
 */
std::optional<AllocationResult> nadir_burn(const State& pre_burn, const Vec3& dv_lvlh,
                                           const ThrusterConfig& config,
                                           const FailureMask& mask,
                                           const Environment& env);

}  // namespace cwhfmt

#endif  // CWHFMT_ALLOCATION_HPP
