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

#ifndef CWHFMT_REACHABILITY_HPP
#define CWHFMT_REACHABILITY_HPP

#include "cwhfmt/cwh.hpp"
#include "cwhfmt/parallel.hpp"
#include "cwhfmt/steering.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cwhfmt {

struct ReachSpec {
  double j_bar = 0.0;
  SteeringLimits limits;
};

/// Directed steering edge between two samples.
struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  SteeringSolution sol;
};

/**
 * @brief Cost-threshold neighbourhoods.
 *
 * `fwd[i]` and `bwd[j]` hold indices into `edges`; fwd lists are sorted by
 * target index and bwd lists by source index.
 */
struct NeighborSets {
  std::vector<Edge> edges;
  std::vector<std::vector<std::uint32_t>> fwd;
  std::vector<std::vector<std::uint32_t>> bwd;

  std::size_t size() const { return fwd.size(); }
  /// Rebuilds bwd from edges/fwd.
  void rebuild_backward();
  bool operator==(const NeighborSets& other) const;
};

enum class ReachClass { InsideInner, Annulus, OutsideOuter };

/// G(T) = Phi_v Phi_v^T.
Mat6 gramian(const OrbitModel& model, double T);

/// ||A||_2 of the CWH dynamics matrix.
double dynamics_norm(const OrbitModel& model);

/// (e^{||A|| t_max} + 1)^2.
double gramian_upper_bound(const OrbitModel& model, double t_max);

/// min over an n_scan-point grid on (0, t_max] of lambda_min(G(T)) / T^2.
double fit_gramian_lower_constant(const OrbitModel& model, double t_max,
                                  int n_scan = 1000);

/**
 * @brief Classifies x_f against the ellipsoids centred at Phi(T) x0.
 *
 * Inner: dV^T dV < j_bar^2 / 2, where the cost at this T is surely below
 * j_bar.  Outer: dV^T dV >= j_bar^2, where the cost at this T is surely at
 * least j_bar.  dV^T dV = d^T G^{-1} d with d = x_f - Phi(T) x0.
 */
ReachClass reach_bounds_contains(const OrbitModel& model, const State& x0,
                                 const State& xf, double T, double j_bar);

struct NeighborBuildOptions {
  /// Skip pairs excluded by the outer ellipsoid at every grid duration.
  bool prune = true;
  /// Safety factor applied to the outer ellipsoid before excluding a pair.
  double prune_factor = 1.1;
  Exec exec = Exec::Parallel;
};

/// Exact directed neighbour sets: edge i -> j kept iff J(x_i, x_j) < j_bar.
NeighborSets build_neighbor_sets(const OrbitModel& model,
                                 std::span<const State> samples,
                                 const ReachSpec& spec,
                                 const NeighborBuildOptions& options = {});

/// Edges from a single (non-sample) state to every sample within j_bar.
std::vector<Edge> forward_row(const SteeringKernel& kernel, const State& x0,
                              std::span<const State> samples, double j_bar,
                              std::uint32_t from_index);

}  // namespace cwhfmt

#endif  // CWHFMT_REACHABILITY_HPP
