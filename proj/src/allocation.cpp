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

#include "cwhfmt/allocation.hpp"

#include "cwhfmt/lp.hpp"

#include <cmath>

namespace cwhfmt {

namespace {

constexpr double kActive = 1e-12;

}  // namespace

void ThrusterConfig::validate() const {
  if (thrusters.empty()) throw std::invalid_argument("thrusters: at least one thruster required");
  for (const auto& t : thrusters) {
    if (std::abs(t.direction.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("thrusters: direction must be a unit vector");
    }
    if (!(t.dv_min >= 0.0) || !(t.dv_max >= t.dv_min)) {
      throw std::invalid_argument("thrusters: require 0 <= dv_min <= dv_max");
    }
  }
  if (!(plume.half_angle > 0.0 && plume.half_angle < std::numbers::pi / 2) ||
      !(plume.height > 0.0)) {
    throw std::invalid_argument("plume: half angle in (0, 90) deg and positive height required");
  }
}

ThrusterConfig ThrusterConfig::default_16(const PlumeModel& plume) {
  ThrusterConfig cfg;
  cfg.plume = plume;
  auto pair = [&](const Vec3& dir, const Vec3& p) {
    // A thruster pushing along `dir` sits on the face opposite to `dir`.
    const Vec3 face = -0.5 * dir;
    cfg.thrusters.push_back(Thruster{face + p, dir});
    cfg.thrusters.push_back(Thruster{face - p, dir});
  };
  const Vec3 ex = Vec3::UnitX();
  const Vec3 ey = Vec3::UnitY();
  const Vec3 ez = Vec3::UnitZ();
  pair(ex, Vec3(0.0, 0.4, 0.2));
  pair(ex, Vec3(0.0, 0.4, -0.2));
  pair(-ex, Vec3(0.0, 0.4, 0.2));
  pair(-ex, Vec3(0.0, 0.4, -0.2));
  pair(ey, Vec3(0.4, 0.0, 0.2));
  pair(-ey, Vec3(0.4, 0.0, 0.2));
  pair(ez, Vec3(0.4, 0.2, 0.0));
  pair(-ez, Vec3(0.4, 0.2, 0.0));
  return cfg;
}

Mat3 attitude_policy(const State&) {
  Mat3 r;
  // Rows are the body axes expressed in LVLH.
  r << 0.0, 1.0, 0.0,   // x_b = +dy
       0.0, 0.0, -1.0,  // y_b = -dz
       -1.0, 0.0, 0.0;  // z_b = -dx (nadir)
  return r;
}

std::optional<AllocationResult> try_allocate(const Vec3& dv_net_body,
                                             const Vec3& moment_net,
                                             const ThrusterConfig& config,
                                             const FailureMask& mask) {
  const auto K = static_cast<Eigen::Index>(config.size());
  if (mask.size() != config.size()) {
    throw std::invalid_argument("allocate: mask length must equal thruster count");
  }
  Eigen::MatrixXd A(6, K);
  Eigen::VectorXd c = Eigen::VectorXd::Ones(K);
  Eigen::VectorXd lo(K);
  Eigen::VectorXd hi(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& t = config.thrusters[static_cast<std::size_t>(k)];
    A.block<3, 1>(0, k) = t.direction;
    A.block<3, 1>(3, k) = t.position.cross(t.direction);
    if (mask[static_cast<std::size_t>(k)]) {
      lo(k) = t.dv_min;
      hi(k) = t.dv_max;
    } else {
      // A failed thruster cannot fire; a nonzero minimum makes the mode
      // infeasible rather than silently ignored.
      if (t.dv_min > 0.0) return std::nullopt;
      lo(k) = 0.0;
      hi(k) = 0.0;
    }
  }
  Eigen::VectorXd b(6);
  b << dv_net_body, moment_net;
  // The LP is positively homogeneous when the box bounds are inactive, so
  // solving a normalised command keeps tolerances meaningful.
  bool homogeneous = true;
  for (const auto& t : config.thrusters) {
    homogeneous = homogeneous && t.dv_min == 0.0 && std::isinf(t.dv_max);
  }
  const double scale = homogeneous ? std::max(b.norm(), 1e-300) : 1.0;
  if (homogeneous && b.norm() == 0.0) {
    return AllocationResult{Eigen::VectorXd::Zero(K), 0.0};
  }
  const LpResult r = solve_lp(c, A, b / scale, lo / scale, hi / scale);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  AllocationResult out;
  out.magnitudes = r.x * scale;
  out.fuel = out.magnitudes.sum();
  return out;
}

AllocationResult allocate(const Vec3& dv_net_body, const Vec3& moment_net,
                          const ThrusterConfig& config, const FailureMask& mask) {
  auto r = try_allocate(dv_net_body, moment_net, config, mask);
  if (!r) throw AllocationInfeasible("allocate: command not realisable under this failure mode");
  return *r;
}

std::vector<FailureMask> enumerate_failure_modes(int K, int F) {
  if (K < 1 || F < 0 || F > K) throw std::invalid_argument("enumerate_failure_modes: need 0 <= F <= K");
  std::vector<FailureMask> out;
  for (int f = 0; f <= F; ++f) {
    std::vector<int> idx(static_cast<std::size_t>(f));
    for (int i = 0; i < f; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      FailureMask m(static_cast<std::size_t>(K), true);
      for (int i : idx) m[static_cast<std::size_t>(i)] = false;
      out.push_back(std::move(m));
      int i = f - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == K - f + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < f; ++j) {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return out;
}

std::size_t failure_mode_count(int K, int F) {
  std::size_t total = 0;
  std::size_t binom = 1;
  for (int f = 0; f <= F; ++f) {
    if (f > 0) binom = binom * static_cast<std::size_t>(K - f + 1) / static_cast<std::size_t>(f);
    total += binom;
  }
  return total;
}

FailureMask all_healthy(std::size_t K) { return FailureMask(K, true); }

bool plumes_clear(const Vec3& r, const Mat3& R, const ThrusterConfig& config,
                  const AllocationResult& alloc, const Environment& env) {
  for (std::size_t k = 0; k < config.size(); ++k) {
    if (alloc.magnitudes(static_cast<Eigen::Index>(k)) <= kActive) continue;
    const auto& t = config.thrusters[k];
    const Vec3 apex = r + R.transpose() * t.position;
    const Vec3 dir = R.transpose() * t.direction;
    if (cone_sphere_intersects(plume_cone(apex, dir, config.plume), env.target())) {
      return false;
    }
  }
  return true;
}

std::optional<AllocationResult> nadir_burn(const State& pre_burn, const Vec3& dv_lvlh,
                                           const ThrusterConfig& config,
                                           const FailureMask& mask,
                                           const Environment& env) {
  if (dv_lvlh.isZero(0.0)) {
    return AllocationResult{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(config.size())), 0.0};
  }
  const Mat3 R = attitude_policy(pre_burn);
  auto alloc = try_allocate(R * dv_lvlh, Vec3::Zero(), config, mask);
  if (!alloc) return std::nullopt;
  if (!plumes_clear(pre_burn.head<3>(), R, config, *alloc, env)) return std::nullopt;
  return alloc;
}

}  // namespace cwhfmt
