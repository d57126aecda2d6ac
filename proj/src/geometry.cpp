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

#include "cwhfmt/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace cwhfmt {

namespace {

double seg_dist(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

}  // namespace

double ConeObstacle::distance(const Vec3& p) const {
  // The solid cone is the revolution of the triangle (0,0), (h,0), (h,h tan b)
  // in (axial, radial) coordinates, so the 3-D distance is the 2-D distance.
  const Vec3 d = p - apex;
  const double a = d.dot(axis);
  const double rho = (d - a * axis).norm();
  const double h = height;
  const double rb = h * std::tan(half_angle);
  if (a >= 0.0 && a <= h && rho <= a * std::tan(half_angle)) return 0.0;
  const double d1 = seg_dist(a, rho, 0.0, 0.0, h, rb);
  const double d2 = seg_dist(a, rho, h, 0.0, h, rb);
  const double d3 = seg_dist(a, rho, 0.0, 0.0, h, 0.0);
  return std::min({d1, d2, d3});
}

double ConeObstacle::bounding_radius() const {
  const double rb = height * std::tan(half_angle);
  return std::hypot(0.5 * height, rb);
}

StateSpaceBox StateSpaceBox::positions(const Vec3& lo, const Vec3& hi) {
  StateSpaceBox b;
  b.lower.head<3>() = lo;
  b.upper.head<3>() = hi;
  return b;
}

Environment::Environment(const ObstacleSet& raw, double chaser_radius)
    : cones_(raw.cones), box_(raw.box), target_(raw.target),
      chaser_radius_(chaser_radius) {
  if (raw.koz) {
    koz_ = EllipsoidKoz{raw.koz->semi_axes + Vec3::Constant(chaser_radius)};
  }
  // Plume apexes sit on the chaser hull, not at its centre.
  target_.radius += chaser_radius;
  for (const auto& c : cones_) {
    cone_prune_radius_.push_back(c.bounding_radius() + chaser_radius);
  }
}

Environment Environment::with_box(const StateSpaceBox& box) const {
  Environment e = *this;
  e.box_ = box;
  return e;
}

bool Environment::in_cone(const Vec3& r) const {
  for (std::size_t i = 0; i < cones_.size(); ++i) {
    const auto& c = cones_[i];
    if ((r - c.bounding_center()).squaredNorm() >
        cone_prune_radius_[i] * cone_prune_radius_[i]) {
      continue;
    }
    if (c.distance(r) <= chaser_radius_) return true;
  }
  return false;
}

bool Environment::in_cone_reference(const Vec3& r) const {
  for (const auto& c : cones_) {
    if (c.distance(r) <= chaser_radius_) return true;
  }
  return false;
}

bool point_clear(const Vec3& r, const Environment& env) {
  if (env.koz() && r.squaredNorm() <= env.koz()->max_radius() * env.koz()->max_radius() &&
      env.koz()->contains(r)) {
    return false;
  }
  return !env.in_cone(r);
}

bool point_feasible(const State& x, const Environment& env) {
  if (!env.box().contains(x)) return false;
  return point_clear(x.head<3>(), env);
}

bool point_feasible_reference(const State& x, const Environment& env) {
  if (!env.box().contains(x)) return false;
  if (env.koz() && env.koz()->contains(x.head<3>())) return false;
  return !env.in_cone_reference(x.head<3>());
}

bool cone_sphere_intersects(const ConeObstacle& cone, const TargetSphere& sphere) {
  return cone.distance(Vec3::Zero()) <= sphere.radius;
}

ConeObstacle plume_cone(const Vec3& r, const Vec3& dv, const PlumeModel& plume) {
  ConeObstacle c;
  c.apex = r;
  c.axis = -dv.normalized();
  c.half_angle = plume.half_angle;
  c.height = plume.height;
  return c;
}

bool trajectory_feasible(const OrbitModel& model, const State& x0,
                         const BurnSchedule& schedule, double t_span,
                         const Environment& env, double dt) {
  return walk_trajectory(model, x0, schedule, t_span, dt,
                         [&](double, const State& x) { return point_feasible(x, env); });
}

}  // namespace cwhfmt
