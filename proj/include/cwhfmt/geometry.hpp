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

#ifndef CWHFMT_GEOMETRY_HPP
#define CWHFMT_GEOMETRY_HPP

#include "cwhfmt/cwh.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace cwhfmt {

/// Axis-aligned ellipsoid centred on the target.  Closed: the boundary is
/// part of the obstacle.
struct EllipsoidKoz {
  Vec3 semi_axes = Vec3::Ones();

  /// r^T E r with E = diag(semi_axes^-2).
  double level(const Vec3& r) const {
    return r.cwiseQuotient(semi_axes).squaredNorm();
  }
  bool contains(const Vec3& r) const { return level(r) <= 1.0; }
  double max_radius() const { return semi_axes.maxCoeff(); }
};

/// Finite right circular cone: apex, unit axis, half-angle and height.
struct ConeObstacle {
  Vec3 apex = Vec3::Zero();
  Vec3 axis = Vec3::UnitX();
  double half_angle = 0.0;
  double height = 0.0;

  /// Euclidean distance from p to the solid cone (0 inside).
  double distance(const Vec3& p) const;
  /// Centre and radius of a sphere enclosing the cone.
  Vec3 bounding_center() const { return apex + 0.5 * height * axis; }
  double bounding_radius() const;
};

struct StateSpaceBox {
  Vec6 lower = Vec6::Constant(-std::numeric_limits<double>::infinity());
  Vec6 upper = Vec6::Constant(std::numeric_limits<double>::infinity());

  bool contains(const State& x) const {
    return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
  }
  /// Box on positions only; velocities unbounded.
  static StateSpaceBox positions(const Vec3& lo, const Vec3& hi);
};

struct PlumeModel {
  double half_angle = 0.0;
  double height = 0.0;
};

struct TargetSphere {
  double radius = 0.0;
};

/// Raw (uninflated) obstacle description.
struct ObstacleSet {
  std::optional<EllipsoidKoz> koz;
  std::vector<ConeObstacle> cones;
  StateSpaceBox box;
  TargetSphere target{10.0};
};

/**
 * @brief Obstacles as seen by a point chaser.
 *
 * The KOZ semi-axes and target radius are inflated by the chaser radius at
 * construction; cones are inflated implicitly through the distance test.
 */
class Environment {
 public:
  Environment() = default;
  Environment(const ObstacleSet& raw, double chaser_radius);

  const std::optional<EllipsoidKoz>& koz() const { return koz_; }
  const std::vector<ConeObstacle>& cones() const { return cones_; }
  const StateSpaceBox& box() const { return box_; }
  const TargetSphere& target() const { return target_; }
  double chaser_radius() const { return chaser_radius_; }

  bool in_koz(const Vec3& r) const { return koz_ && koz_->contains(r); }
  /// True when r is within chaser_radius of any cone.
  bool in_cone(const Vec3& r) const;
  bool in_cone_reference(const Vec3& r) const;

  /// Copy with a different state-space box.
  Environment with_box(const StateSpaceBox& box) const;

 private:
  std::optional<EllipsoidKoz> koz_;
  std::vector<ConeObstacle> cones_;
  std::vector<double> cone_prune_radius_;
  StateSpaceBox box_;
  TargetSphere target_;
  double chaser_radius_ = 0.0;
};

/// Box membership, KOZ exclusion and cone exclusion with bounding-sphere
/// early outs.
bool point_feasible(const State& x, const Environment& env);
/// Same predicate without any bounding-volume pruning.
bool point_feasible_reference(const State& x, const Environment& env);

/// KOZ and cone exclusion only (no box).
bool point_clear(const Vec3& r, const Environment& env);

/// Exact finite cone vs sphere-at-origin intersection.
bool cone_sphere_intersects(const ConeObstacle& cone, const TargetSphere& sphere);

/// Plume cone of a burn `dv` fired from `r`: apex at r, axis along -dv.
ConeObstacle plume_cone(const Vec3& r, const Vec3& dv, const PlumeModel& plume);

/**
 * @brief point_feasible at every grid time k*dt in [0, t_span], at every
 * burn instant (pre- and post-burn) and at t_span.
 */
bool trajectory_feasible(const OrbitModel& model, const State& x0,
                         const BurnSchedule& schedule, double t_span,
                         const Environment& env, double dt);

}  // namespace cwhfmt

#endif  // CWHFMT_GEOMETRY_HPP
