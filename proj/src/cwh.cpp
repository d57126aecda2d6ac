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

#include "cwhfmt/cwh.hpp"

#include <cmath>
#include <stdexcept>

namespace cwhfmt {

OrbitModel::OrbitModel(double omega) : omega_(omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("OrbitModel: omega must be positive and finite");
  }
}

Mat6 OrbitModel::dynamics_matrix() const {
  const double w = omega_;
  Mat6 a = Mat6::Zero();
  a(0, 3) = 1.0;
  a(1, 4) = 1.0;
  a(2, 5) = 1.0;
  a(3, 0) = 3.0 * w * w;
  a(3, 4) = 2.0 * w;
  a(4, 3) = -2.0 * w;
  a(5, 2) = -w * w;
  return a;
}

bool BurnSchedule::is_sorted() const {
  for (std::size_t i = 1; i < impulses.size(); ++i) {
    if (impulses[i].tau < impulses[i - 1].tau) return false;
  }
  return true;
}

double BurnSchedule::cost() const {
  double c = 0.0;
  for (const auto& imp : impulses) c += imp.dv.norm();
  return c;
}

Mat6 stm(const OrbitModel& model, double T) {
  const double w = model.omega();
  const double th = w * T;
  const double s = std::sin(th);
  const double c = std::cos(th);
  Mat6 p = Mat6::Zero();
  // In-plane block (x, y, vx, vy).
  p(0, 0) = 4.0 - 3.0 * c;
  p(0, 3) = s / w;
  p(0, 4) = 2.0 * (1.0 - c) / w;
  p(1, 0) = 6.0 * (s - th);
  p(1, 1) = 1.0;
  p(1, 3) = -2.0 * (1.0 - c) / w;
  p(1, 4) = (4.0 * s - 3.0 * th) / w;
  p(3, 0) = 3.0 * w * s;
  p(3, 3) = c;
  p(3, 4) = 2.0 * s;
  p(4, 0) = -6.0 * w * (1.0 - c);
  p(4, 3) = -2.0 * s;
  p(4, 4) = 4.0 * c - 3.0;
  // Out-of-plane harmonic oscillator (z, vz).
  p(2, 2) = c;
  p(2, 5) = s / w;
  p(5, 2) = -w * s;
  p(5, 5) = c;
  return p;
}

Mat3 stm_rv(const OrbitModel& model, double T) {
  const double w = model.omega();
  const double th = w * T;
  const double s = std::sin(th);
  const double c = std::cos(th);
  Mat3 m = Mat3::Zero();
  m(0, 0) = s / w;
  m(0, 1) = 2.0 * (1.0 - c) / w;
  m(1, 0) = -2.0 * (1.0 - c) / w;
  m(1, 1) = (4.0 * s - 3.0 * th) / w;
  m(2, 2) = s / w;
  return m;
}

Mat3 stm_vv(const OrbitModel& model, double T) {
  const double th = model.omega() * T;
  const double s = std::sin(th);
  const double c = std::cos(th);
  Mat3 m = Mat3::Zero();
  m(0, 0) = c;
  m(0, 1) = 2.0 * s;
  m(1, 0) = -2.0 * s;
  m(1, 1) = 4.0 * c - 3.0;
  m(2, 2) = c;
  return m;
}

State propagate_coast(const OrbitModel& model, const State& x0, double T) {
  if (T == 0.0) return x0;
  return stm(model, T) * x0;
}

State propagate_schedule(const OrbitModel& model, const State& x0,
                         const BurnSchedule& schedule, double t) {
  State x = x0;
  double t_cur = 0.0;
  for (const auto& imp : schedule.impulses) {
    if (imp.tau > t) break;
    x = propagate_coast(model, x, imp.tau - t_cur);
    x.tail<3>() += imp.dv;
    t_cur = imp.tau;
  }
  return propagate_coast(model, x, t - t_cur);
}

Mat6 impulse_matrix(const OrbitModel& model, double T) {
  Mat6 m;
  m.leftCols<3>() = stm(model, T).rightCols<3>();
  m.rightCols<3>() = input_matrix();
  return m;
}

Eigen::MatrixXd stacked_impulse_matrix(const OrbitModel& model, double t_final,
                                       std::span<const double> taus) {
  Eigen::MatrixXd m(6, 3 * static_cast<Eigen::Index>(taus.size()));
  for (std::size_t i = 0; i < taus.size(); ++i) {
    m.block<6, 3>(0, 3 * static_cast<Eigen::Index>(i)) =
        stm(model, t_final - taus[i]).rightCols<3>();
  }
  return m;
}

}  // namespace cwhfmt
