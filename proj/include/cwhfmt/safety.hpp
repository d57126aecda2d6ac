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

#ifndef CWHFMT_SAFETY_HPP
#define CWHFMT_SAFETY_HPP

#include "cwhfmt/allocation.hpp"
#include "cwhfmt/cwh.hpp"
#include "cwhfmt/geometry.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace cwhfmt {

class UnsafeState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InvariantSetSpec {
  double rho_x = 0.0;
};

/// |dx| >= rho_x, dvx = 0, dvy = -1.5 omega dx (velocity tolerance `tol`).
bool is_invariant(const OrbitModel& model, const State& x, const InvariantSetSpec& spec,
                  double tol = 1e-9);

/// Burn that circularises the relative orbit at x: (-dvx, -1.5 w dx - dvy, -dvz).
Impulse circularization_burn(const OrbitModel& model, const State& x);

/// |circularisation burn|^2 after coasting through anomaly theta.
double circularization_cost_sq(const OrbitModel& model, const State& x0, double theta);

/// Closed-form d/dtheta of circularization_cost_sq.
double circularization_cost_slope(const OrbitModel& model, const State& x0, double theta);

/// One-burn collision-avoidance manoeuvre: coast for Th then circularise.
struct CamResult {
  double theta_star = 0.0;
  double Th = 0.0;
  Impulse dv_circ;
  State pre_burn = State::Zero();
  State post_state = State::Zero();
  /// Upper end of the admissible coast anomaly (first KOZ contact or 2 pi).
  double theta_max = 0.0;
};

/**
 * @brief Minimum-cost circularisation into the invariant set.
 *
 * Candidates are the interval ends, the stationary points of the burn cost
 * and the coast anomalies where |dx| reaches the band edge.  Throws
 * UnsafeState when x_fail is inside the KOZ or no candidate ends outside
 * the band.
 */
CamResult optimal_cam(const OrbitModel& model, const State& x_fail, const Environment& env,
                      double dt);

/// Every admissible candidate anomaly considered by optimal_cam.
std::vector<double> cam_candidates(const OrbitModel& model, const State& x_fail,
                                   const Environment& env, double dt, double* theta_max);

enum class CamPolicy : std::uint8_t {
  /// Slew so that some healthy thruster faces the burn; only the plume of
  /// the burn itself is checked.
  TurnBurnTurn = 0,
  /// Keep the nadir attitude and allocate torque-free under the mask.
  NadirHold = 1,
  /// No abort burn; the free coast itself must stay clear.
  Passive = 2,
};

std::string_view to_string(CamPolicy p);

enum class CamFailure : std::uint8_t {
  None = 0,
  InsideKoz,
  NoInvariantCandidate,
  CoastArcBlocked,
  PostArcBlocked,
  BurnUnallocatable,
  PlumeImpingement,
};

std::string_view to_string(CamFailure f);

struct SafetyContext {
  OrbitModel model{1.0};
  Environment env;
  ThrusterConfig config;
  int fault_tolerance = 0;
  double dt = 1.0;
  CamPolicy policy = CamPolicy::TurnBurnTurn;
  std::vector<FailureMask> modes;

  SafetyContext() = default;
  SafetyContext(const OrbitModel& m, Environment e, ThrusterConfig c, int F, double step,
                CamPolicy p);
};

/**
 * @brief Abort plan for a state with a verdict for every failure mode.
 *
 * `prefix_dv` is a burn executed at the state before the CAM coast starts
 * (the rendezvous burn that a merged junction would otherwise absorb).
 */
struct CamCertificate {
  bool safe = false;
  CamFailure reason = CamFailure::None;
  std::optional<CamResult> cam;
  Vec3 prefix_dv = Vec3::Zero();
  std::vector<std::uint8_t> mode_ok;
  std::uint32_t first_failed_mode = 0;

  std::size_t feasible_count() const;
};

CamCertificate certify_state(const SafetyContext& ctx, const State& x);

/// Certificate of the abort "apply prefix_dv at x, then the CAM".
CamCertificate certify_with_prefix(const SafetyContext& ctx, const State& x,
                                   const Vec3& prefix_dv);

/**
 * @brief certify_with_prefix reusing the certificate of x + prefix_dv.
 *
 * `base` must be certify_state(ctx, x + prefix_dv); only the prefix burn
 * verdicts are evaluated.
 */
CamCertificate extend_with_prefix(const SafetyContext& ctx, const CamCertificate& base,
                                  const State& x, const Vec3& prefix_dv);

/// Verdict for executing `dv` from `pre` under one failure mode.
CamFailure burn_verdict(const SafetyContext& ctx, const State& pre, const Vec3& dv,
                        const FailureMask& mask);

}  // namespace cwhfmt

#endif  // CWHFMT_SAFETY_HPP
