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

#ifndef CWHFMT_PLANNER_HPP
#define CWHFMT_PLANNER_HPP

#include "cwhfmt/allocation.hpp"
#include "cwhfmt/reachability.hpp"
#include "cwhfmt/safety.hpp"
#include "cwhfmt/sampling.hpp"
#include "cwhfmt/steering.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cwhfmt {

/// Offline product for one subplan.
struct LegData {
  SampleSpace space;
  GoalRegion goal;
  /// Index of the exact goal sample, or -1 in inexact mode.
  std::int64_t goal_index = -1;
  SampleSet samples;
  NeighborSets nbrs;
};

struct PrecomputedGraphData {
  static constexpr std::uint32_t kFormatVersion = 1;

  std::uint64_t fingerprint = 0;
  /// State-space dimension: 4 planar, 6 otherwise.
  std::uint32_t d = 4;
  double j_bar = 0.0;
  std::vector<LegData> legs;

  std::size_t total_samples() const;
  std::size_t total_edges() const;
  std::size_t total_certified() const;
};

/// Everything precompute needs for one leg.
struct LegSpec {
  SampleSpace space;
  GoalRegion goal;
  std::size_t n = 0;
  std::size_t n_goal = 0;
  /// Add the goal centre itself as a sample and terminate only there.
  bool exact = false;
};

struct PrecomputeOptions {
  SamplingOptions sampling;
  NeighborBuildOptions neighbors;
};

LegData precompute_leg(const LegSpec& spec, const SafetyContext& ctx, const ReachSpec& reach,
                       const PrecomputeOptions& options = {});

struct PlannerOptions {
  /// Vector-sum the rendezvous and departure burns at every junction and
  /// account cost-to-come accordingly.
  bool merge = true;
  /// Certify every dt point of the returned trajectory.
  bool strict = false;
};

/// Planned edge between two nodes of one leg.  Node -1 is the leg root.
struct PlanEdge {
  std::uint32_t leg = 0;
  std::int64_t from = -1;
  std::int64_t to = -1;
  SteeringSolution sol;
  double t_start = 0.0;
};

/// Executed burn with the velocity change it absorbs from an arrival.
struct PlannedBurn {
  Impulse imp;
  /// Part of `imp` that completes a rendezvous with a sample (zero for a
  /// pure departure).
  Vec3 arrival = Vec3::Zero();
};

struct Plan {
  State x_init = State::Zero();
  std::vector<PlanEdge> edges;
  std::vector<PlannedBurn> burns;
  BurnSchedule schedule;
  double t_final = 0.0;
  State x_final = State::Zero();
  double cost = 0.0;
  /// Per burn of `schedule`.
  std::vector<AllocationResult> allocations;
  std::vector<CamCertificate> certificates;
  double fuel = 0.0;
};

struct PlanStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t connection_attempts = 0;
  std::uint64_t connections_rejected = 0;
  std::uint64_t root_neighbors = 0;
  std::uint64_t strict_points = 0;
  std::uint64_t strict_violations = 0;
};

struct LegResult {
  bool success = false;
  std::string diagnostics;
  /// Edges root -> goal node, times relative to the leg start.
  std::vector<PlanEdge> edges;
  State x_final = State::Zero();
  double cost_to_come = 0.0;
  PlanStats stats;
};

/**
 * @brief Lazy FMT* over the precomputed leg graph.
 *
 * `root_incoming` is the burn that brought the chaser to x_init (merged
 * into the first departure when merging is on).
 */
LegResult fmt_plan(const State& x_init, const Vec3& root_incoming, std::uint32_t leg_index,
                   const LegData& leg, const SafetyContext& ctx, const ReachSpec& reach,
                   const PlannerOptions& options);

Impulse merge_junction(const Impulse& dv_in, const Impulse& dv_out);

/// Burn sequence of consecutive edges, merging at junctions when asked.
std::vector<PlannedBurn> assemble_burns(const std::vector<PlanEdge>& edges, bool merge);

struct ChainResult {
  bool success = false;
  std::int64_t failed_leg = -1;
  std::string diagnostics;
  Plan plan;
  std::vector<double> leg_costs;
  PlanStats stats;
};

/**
 * @brief Plans every leg in turn from x_init and concatenates the results.
 *
 * Allocations and abort certificates are recomputed for every burn of the
 * final schedule.
 */
ChainResult chain_waypoints(const State& x_init, const PrecomputedGraphData& data,
                            const SafetyContext& ctx, const ReachSpec& reach,
                            const PlannerOptions& options);

/// Allocations and certificates for every burn of `plan.schedule`.
void annotate_plan(Plan& plan, const SafetyContext& ctx);

/// Number of dt grid states of the schedule that fail certify_state.
std::uint64_t strict_violations(const Plan& plan, const SafetyContext& ctx,
                                std::uint64_t* points_checked);

}  // namespace cwhfmt

#endif  // CWHFMT_PLANNER_HPP
