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

#ifndef CWHFMT_SAMPLING_HPP
#define CWHFMT_SAMPLING_HPP

#include "cwhfmt/cwh.hpp"
#include "cwhfmt/geometry.hpp"
#include "cwhfmt/parallel.hpp"
#include "cwhfmt/safety.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cwhfmt {

class SamplingExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Radical-inverse coordinates of `index` (>= 1) in the first `dim` prime
/// bases.
std::array<double, 6> halton(std::uint64_t index, int dim);

struct SampleSpace {
  StateSpaceBox box;
  bool planar = true;

  /// Number of free coordinates: 4 when planar, 6 otherwise.
  int dim() const { return planar ? 4 : 6; }
  /// Maps a unit-cube point onto the box (z, vz pinned to 0 when planar).
  State from_unit(const std::array<double, 6>& u) const;
};

/// Inexact-convergence target: position and velocity balls.
struct GoalRegion {
  State center = State::Zero();
  double eps_r = 0.0;
  double eps_v = 0.0;

  bool contains(const State& x) const;
  /// Norm-preserving map of a unit-cube point into the region.
  State from_unit(const std::array<double, 6>& u, bool planar) const;
};

struct SampleSet {
  std::vector<State> states;
  /// First `n` states are space samples, the remaining `n_goal` goal samples.
  std::size_t n = 0;
  std::size_t n_goal = 0;
  std::vector<CamCertificate> certificates;
  /// Halton draws consumed (space, goal).
  std::uint64_t draws = 0;
  std::uint64_t goal_draws = 0;
};

struct SamplingOptions {
  /// Stall window: SamplingExhausted when fewer than window * min_rate
  /// candidates are accepted over the last `window` draws.
  std::uint64_t window = 10000;
  double min_rate = 1e-3;
  /// Candidates screened per batch (screening may run in parallel).
  std::size_t batch = 256;
  Exec exec = Exec::Parallel;
};

/**
 * @brief Halton samples that are collision-free and certified safe.
 *
 * Space samples are drawn from `space` until `n` are accepted; then
 * `n_goal` accepted samples are drawn inside `goal`.  Every candidate must
 * pass point_feasible against `ctx.env` and certify_state.
 */
SampleSet sample_free(const SampleSpace& space, std::size_t n, const SafetyContext& ctx,
                      const GoalRegion& goal, std::size_t n_goal,
                      const SamplingOptions& options = {});

}  // namespace cwhfmt

#endif  // CWHFMT_SAMPLING_HPP
