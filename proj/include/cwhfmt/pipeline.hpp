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

#ifndef CWHFMT_PIPELINE_HPP
#define CWHFMT_PIPELINE_HPP

#include "cwhfmt/planner.hpp"
#include "cwhfmt/scenario.hpp"
#include "cwhfmt/smoothing.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cwhfmt {

/// Offline phase: samples, certificates and neighbor sets of every leg.
PrecomputedGraphData precompute_scenario(const Scenario& s, const PrecomputeOptions& options = {});

struct RunOptions {
  bool smooth = true;
  bool strict = false;
};

/// Run options implied by the scenario's planner and smoothing blocks.
RunOptions run_options_for(const Scenario& s);

struct RunOutcome {
  ChainResult chain;
  /// Plan actually flown: smoothed when smoothing ran and improved it.
  Plan plan;
  std::optional<SmoothedPlan> smoothing;
  double unsmoothed_cost = 0.0;
  double planner_seconds = 0.0;
  double smoothing_seconds = 0.0;
  double online_seconds() const { return planner_seconds + smoothing_seconds; }
  bool success() const { return chain.success; }
};

/**
 * @brief Online phase: chained FMT* over the legs, then smoothing.
 *
 * Throws FingerprintMismatch when `data` was built from another scenario.
 */
RunOutcome plan_scenario(const Scenario& s, const PrecomputedGraphData& data,
                         const RunOptions& options);

/// Evenly spaced values lo..hi (count >= 1); integers are rounded by callers.
std::vector<double> linspace(double lo, double hi, int count);

struct BenchCell {
  std::size_t n_total = 0;
  double j_bar = 0.0;
  bool success = false;
  std::string outcome;
  double unsmoothed_cost = 0.0;
  double smoothed_cost = 0.0;
  double planner_seconds = 0.0;
  double online_seconds = 0.0;
  /// Largest terminal error over the accepted smoothing iterates.
  double max_bc_error = 0.0;
};

/**
 * @brief Cost-vs-runtime sweep.  `n_values` are totals over all legs.
 *
 * Cells run on the worker pool; results come back in row-major
 * (n outer, j_bar inner) order regardless of completion order.
 */
std::vector<BenchCell> run_sweep(const Scenario& base, const std::vector<std::size_t>& n_values,
                                 const std::vector<double>& j_values);

}  // namespace cwhfmt

#endif  // CWHFMT_PIPELINE_HPP
