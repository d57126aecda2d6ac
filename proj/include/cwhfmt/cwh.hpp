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

#ifndef CWHFMT_CWH_HPP
#define CWHFMT_CWH_HPP

#include <Eigen/Dense>

#include <numbers>
#include <span>
#include <vector>

namespace cwhfmt {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/**
 * @brief Relative state in the target LVLH frame.
 *
 * Layout is [dx, dy, dz, dvx, dvy, dvz]: x radial (away from the attractor),
 * y in-track, z out-of-plane (orbit normal).  Units are metres and m/s.
 */
using State = Vec6;

inline Vec3 position(const State& x) { return x.head<3>(); }
inline Vec3 velocity(const State& x) { return x.tail<3>(); }
inline State make_state(const Vec3& r, const Vec3& v) {
  State x;
  x << r, v;
  return x;
}

/// True when the state lies exactly in the orbital plane (dz = dvz = 0).
inline bool is_planar(const State& x) { return x(2) == 0.0 && x(5) == 0.0; }

/// Circular target orbit, characterised entirely by its mean motion.
class OrbitModel {
 public:
  explicit OrbitModel(double omega);

  double omega() const { return omega_; }
  double period() const { return 2.0 * std::numbers::pi / omega_; }

  /// Continuous-time dynamics matrix of the CWH equations.
  Mat6 dynamics_matrix() const;

 private:
  double omega_;
};

/// Instantaneous velocity change applied at time `tau` (relative to plan start).
struct Impulse {
  Vec3 dv = Vec3::Zero();
  double tau = 0.0;
};

/// Ordered sequence of impulses.  Times are non-decreasing.
struct BurnSchedule {
  std::vector<Impulse> impulses;

  bool empty() const { return impulses.empty(); }
  std::size_t size() const { return impulses.size(); }
  bool is_sorted() const;
  /// Sum of impulse 2-norms.
  double cost() const;
  void append(const Impulse& imp) { impulses.push_back(imp); }
};

/// State-transition matrix Phi(T) = exp(A T), closed form.  Negative T
/// gives the inverse map.
Mat6 stm(const OrbitModel& model, double T);

/// Upper-right 3x3 block of Phi(T): position response to an initial velocity.
Mat3 stm_rv(const OrbitModel& model, double T);
/// Lower-right 3x3 block of Phi(T): velocity response to an initial velocity.
Mat3 stm_vv(const OrbitModel& model, double T);

State propagate_coast(const OrbitModel& model, const State& x0, double T);

/**
 * @brief Propagates `x0` (given at time 0) through `schedule` up to time `t`.
 *
 * Impulses with tau <= t are applied, so an impulse scheduled exactly at `t`
 * is included and the returned state is the post-burn state.
 */
State propagate_schedule(const OrbitModel& model, const State& x0,
                         const BurnSchedule& schedule, double t);

/// [Phi(T) B, B]: maps stacked (dv at 0, dv at T) to the state offset at T.
Mat6 impulse_matrix(const OrbitModel& model, double T);

/// Phi(t_f - tau_i) B blocks stacked column-wise for burns at `taus`.
Eigen::MatrixXd stacked_impulse_matrix(const OrbitModel& model, double t_final,
                                       std::span<const double> taus);

/// Velocity-input matrix B.
inline Eigen::Matrix<double, 6, 3> input_matrix() {
  Eigen::Matrix<double, 6, 3> b = Eigen::Matrix<double, 6, 3>::Zero();
  b.bottomRows<3>().setIdentity();
  return b;
}

/**
 * @brief States of a scheduled trajectory on a fixed time grid.
 *
 * Emits the state at every grid time k*dt in [0, t_end], the pre- and
 * post-burn states at every impulse instant, and the terminal state.
 * Calls `visit(t, x)` in time order and stops early when it returns false.
 * Returns false iff the visitor stopped the walk.
 */
template <typename Visitor>
bool walk_trajectory(const OrbitModel& model, const State& x0,
                     const BurnSchedule& schedule, double t_end, double dt,
                     Visitor&& visit);

}  // namespace cwhfmt

#include "cwhfmt/detail/walk_trajectory.ipp"

#endif  // CWHFMT_CWH_HPP
