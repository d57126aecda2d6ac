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

#ifndef CWHFMT_SMOOTHING_HPP
#define CWHFMT_SMOOTHING_HPP

#include "cwhfmt/cwh.hpp"
#include "cwhfmt/planner.hpp"
#include "cwhfmt/safety.hpp"
#include "cwhfmt/socp.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace cwhfmt {

class InfeasibleSOCP : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position the smoothed trajectory must still pass through at time t.
struct PassThrough {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
};

struct SmoothingProblem {
  State x_init = State::Zero();
  State x_goal = State::Zero();
  std::vector<double> taus;
  double t_final = 0.0;
  double dv_max = std::numeric_limits<double>::infinity();
  double alpha_tol = 1.0 / 64.0;
  /// Rendezvous part of each planned burn; the abort of a blended burn
  /// executes (1 - alpha) times this before the CAM.
  std::vector<Vec3> rendezvous_prefix;
  /// Extra equality constraints (per-leg mode keeps the leg junctions).
  std::vector<PassThrough> pass_through;
};

enum class SmoothingMode { WholePlan, PerLeg };

/// Burn times, horizon and boundary states of an existing plan.  PerLeg
/// additionally pins the position at every leg junction.
SmoothingProblem smoothing_problem_for(const OrbitModel& model, const Plan& plan,
                                       double alpha_tol,
                                       SmoothingMode mode = SmoothingMode::WholePlan);

/**
 * @brief Minimum-fuel impulses at fixed times reaching x_goal at t_final.
 *
 * Throws InfeasibleSOCP when the boundary conditions cannot be met within
 * the caps (or the solver fails to converge).
 */
BurnSchedule min_fuel_fixed_times(const OrbitModel& model, const SmoothingProblem& problem,
                                  const SocpOptions& options = {},
                                  SocpResult* info = nullptr);

/// Schedule with impulses (1 - alpha) a_i + alpha b_i at the common times.
BurnSchedule blend_schedules(double alpha, const BurnSchedule& a, const BurnSchedule& b);

/// State at t of the alpha-blended schedule.
State convex_combination_state(const OrbitModel& model, double alpha, const State& x_init,
                               const BurnSchedule& plan_sched,
                               const BurnSchedule& dagger_sched, double t);

struct SmoothedPlan {
  double alpha_star = 0.0;
  BurnSchedule schedule;
  double cost = 0.0;
  int iterations = 0;
  /// False when the SOCP failed and the input plan was returned.
  bool socp_ok = false;
  double socp_cost = 0.0;
  /// Terminal error ||x(t_f) - x_goal||_inf of every accepted iterate.
  std::vector<double> accepted_bc_errors;
  std::vector<double> tried_alphas;
  /// Certified abort prefix of each burn of `schedule`.
  std::vector<Vec3> abort_prefix;
};

/**
 * @brief Feasibility of the alpha-blended schedule: trajectory, nominal
 * allocation and plume of each burn, and an abort certificate at each burn.
 *
 * A burn is certified with the blended rendezvous prefix first and the whole
 * burn second; the prefix that worked is written to `prefixes`.
 */
bool smoothing_candidate_ok(double alpha, const BurnSchedule& sched,
                            const SmoothingProblem& problem, const SafetyContext& ctx,
                            std::vector<Vec3>* prefixes = nullptr);

/**
 * @brief Bisection on the weight between the plan and the SOCP optimum.
 *
 * Returns alpha = 1 immediately when the SOCP schedule itself is feasible;
 * at worst the input plan (alpha = 0).
 */
SmoothedPlan smooth(const Plan& plan, const SafetyContext& ctx, const SmoothingProblem& problem,
                    const SocpOptions& options = {});

/// Plan with the smoothed schedule, re-annotated with allocations and
/// certificates.
Plan apply_smoothing(const Plan& plan, const SmoothedPlan& sm, const SafetyContext& ctx);

}  // namespace cwhfmt

#endif  // CWHFMT_SMOOTHING_HPP
