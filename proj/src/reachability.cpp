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

#include "cwhfmt/reachability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cwhfmt {

namespace {

bool same_solution(const SteeringSolution& a, const SteeringSolution& b) {
  return a.T == b.T && a.cost == b.cost && a.dv1.dv == b.dv1.dv &&
         a.dv2.dv == b.dv2.dv && a.dv1.tau == b.dv1.tau && a.dv2.tau == b.dv2.tau;
}

std::vector<Edge> solve_row(const SteeringKernel& kernel, std::uint32_t i,
                            std::span<const State> samples, double j_bar,
                            double prune_factor) {
  std::vector<Edge> row;
  const State& xi = samples[i];
  for (std::uint32_t j = 0; j < samples.size(); ++j) {
    if (j == i) continue;
    auto sol = kernel.solve_within(xi, samples[j], j_bar, prune_factor);
    if (sol && sol->cost < j_bar) row.push_back(Edge{i, j, *sol});
  }
  return row;
}

}  // namespace

void NeighborSets::rebuild_backward() {
  bwd.assign(fwd.size(), {});
  // fwd lists are visited in source order, so every bwd list ends up sorted
  // by source index.
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    for (std::uint32_t e : fwd[i]) bwd[edges[e].to].push_back(e);
  }
}

bool NeighborSets::operator==(const NeighborSets& other) const {
  if (fwd != other.fwd || bwd != other.bwd || edges.size() != other.edges.size()) {
    return false;
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].from != other.edges[e].from || edges[e].to != other.edges[e].to ||
        !same_solution(edges[e].sol, other.edges[e].sol)) {
      return false;
    }
  }
  return true;
}

Mat6 gramian(const OrbitModel& model, double T) {
  const Mat6 phiv = impulse_matrix(model, T);
  return phiv * phiv.transpose();
}

double dynamics_norm(const OrbitModel& model) {
  Eigen::JacobiSVD<Mat6> svd(model.dynamics_matrix());
  return svd.singularValues()(0);
}

double gramian_upper_bound(const OrbitModel& model, double t_max) {
  const double e = std::exp(dynamics_norm(model) * t_max) + 1.0;
  return e * e;
}

double fit_gramian_lower_constant(const OrbitModel& model, double t_max, int n_scan) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n_scan; ++k) {
    const double T = t_max * static_cast<double>(k) / static_cast<double>(n_scan);
    Eigen::SelfAdjointEigenSolver<Mat6> es(gramian(model, T), Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues()(0) / (T * T));
  }
  return m;
}

ReachClass reach_bounds_contains(const OrbitModel& model, const State& x0,
                                 const State& xf, double T, double j_bar) {
  const State d = xf - propagate_coast(model, x0, T);
  if (d.isZero(0.0)) return ReachClass::InsideInner;
  // d^T G^{-1} d through the factor Phi_v rather than forming G^{-1}.
  const Vec6 dv = impulse_matrix(model, T).partialPivLu().solve(d);
  const double q = dv.squaredNorm();
  const double j2 = j_bar * j_bar;
  if (q < 0.5 * j2) return ReachClass::InsideInner;
  if (q >= j2) return ReachClass::OutsideOuter;
  return ReachClass::Annulus;
}

NeighborSets build_neighbor_sets(const OrbitModel& model,
                                 std::span<const State> samples,
                                 const ReachSpec& spec,
                                 const NeighborBuildOptions& options) {
  const SteeringKernel kernel(model, spec.limits);
  const auto n = static_cast<std::int64_t>(samples.size());
  const double factor =
      options.prune ? options.prune_factor : std::numeric_limits<double>::infinity();
  std::vector<std::vector<Edge>> rows(samples.size());

  if (options.exec == Exec::Parallel) {
    configure_workers();
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < n; ++i) {
      rows[static_cast<std::size_t>(i)] =
          solve_row(kernel, static_cast<std::uint32_t>(i), samples, spec.j_bar, factor);
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      rows[static_cast<std::size_t>(i)] =
          solve_row(kernel, static_cast<std::uint32_t>(i), samples, spec.j_bar, factor);
    }
  }

  NeighborSets out;
  out.fwd.resize(samples.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (auto& e : rows[i]) {
      out.fwd[i].push_back(static_cast<std::uint32_t>(out.edges.size()));
      out.edges.push_back(std::move(e));
    }
  }
  out.rebuild_backward();
  return out;
}

std::vector<Edge> forward_row(const SteeringKernel& kernel, const State& x0,
                              std::span<const State> samples, double j_bar,
                              std::uint32_t from_index) {
  std::vector<Edge> row;
  for (std::uint32_t j = 0; j < samples.size(); ++j) {
    auto sol = kernel.solve_within(x0, samples[j], j_bar, 1.1);
    if (sol && sol->cost < j_bar) row.push_back(Edge{from_index, j, *sol});
  }
  return row;
}

}  // namespace cwhfmt
