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

#ifndef CWHFMT_STEERING_HPP
#define CWHFMT_STEERING_HPP

#include "cwhfmt/cwh.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cwhfmt {

class SingularDuration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoFeasibleSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SteeringLimits {
  double t_max = 0.0;
  double dv_max = std::numeric_limits<double>::infinity();
  int t_grid = 64;
  double refine_tol = 0.0;

  /// t_max = frac * period, refine_tol = t_max * 1e-4.
  static SteeringLimits from_period_fraction(const OrbitModel& model,
                                             double frac = 0.1);
  /// Throws std::invalid_argument when the limits are unusable for `model`.
  void validate(const OrbitModel& model) const;
};

/// Two-impulse transfer: dv1 at relative time 0, dv2 at relative time T.
struct SteeringSolution {
  Impulse dv1;
  Impulse dv2;
  double T = 0.0;
  double cost = 0.0;

  /// Stacked 6-vector [dv1; dv2].
  Vec6 stacked() const;
  BurnSchedule schedule() const;
};

/**
 * @brief Unique two-impulse transfer of fixed duration T.
 *
 * Throws SingularDuration when cond([Phi(T)B, B]) > 1e12.
 */
SteeringSolution steer_fixed_T(const OrbitModel& model, const State& x0,
                               const State& xf, double T);

/**
 * @brief Minimum-cost two-impulse transfer over T in [0, t_max].
 *
 * Coarse uniform grid on (0, t_max] followed by golden-section refinement
 * around every grid local minimum.  T = 0 is a candidate only when the
 * positions coincide.  Throws NoFeasibleSolution when every candidate breaks
 * the per-burn dv_max cap.
 */
SteeringSolution solve_2pbvp(const OrbitModel& model, const State& x0,
                             const State& xf, const SteeringLimits& limits);

/// solve_2pbvp cost, or +inf when no candidate satisfies the caps.
double steering_cost(const OrbitModel& model, const State& x0,
                     const State& xf, const SteeringLimits& limits);

/**
 * @brief solve_2pbvp with the duration-grid matrices cached.
 *
 * Produces the same result as solve_2pbvp.  Intended for the all-pairs
 * precompute where the same grid is evaluated millions of times.
 */
class SteeringKernel {
 public:
  SteeringKernel(const OrbitModel& model, const SteeringLimits& limits);

  const OrbitModel& model() const { return model_; }
  const SteeringLimits& limits() const { return limits_; }
  const std::vector<double>& grid() const { return grid_t_; }

  std::optional<SteeringSolution> solve(const State& x0, const State& xf) const;

  /**
   * @brief Like solve(), but gives up early when the pair cannot beat
   * `j_bar`.
   *
   * Returns nullopt when the stacked norm ||dV(T_k)|| is at least
   * `prune_factor * j_bar` at every grid duration (the outer reachability
   * ellipsoid excludes x_f at every grid T); local minima failing the same
   * test are not refined.  With prune_factor = +inf this is solve().
   */
  std::optional<SteeringSolution> solve_within(const State& x0,
                                               const State& xf, double j_bar,
                                               double prune_factor) const;

 private:
  struct GridEntry {
    Mat6 phi;
    Mat3 rv_inv;
    Mat3 vv;
    bool ok = false;
  };

  OrbitModel model_;
  SteeringLimits limits_;
  std::vector<double> grid_t_;
  std::vector<GridEntry> grid_;
};

/// Fast two-impulse solve via the closed-form 3x3 block inverse.  Returns
/// false when the position block is numerically singular.
bool two_impulse(const OrbitModel& model, double T, const State& x0,
                 const State& xf, Vec3& dv1, Vec3& dv2);

}  // namespace cwhfmt

#endif  // CWHFMT_STEERING_HPP
