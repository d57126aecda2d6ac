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

#ifndef CWHFMT_REPORT_HPP
#define CWHFMT_REPORT_HPP

#include "cwhfmt/pipeline.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cwhfmt {

struct RunCounters {
  std::uint64_t samples = 0;
  std::uint64_t edges = 0;
  std::uint64_t certified = 0;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t connection_attempts = 0;
  std::uint64_t connections_rejected = 0;
  std::uint64_t root_neighbors = 0;
  std::uint64_t strict_points = 0;
  std::uint64_t strict_violations = 0;
};

struct RunReport {
  std::string outcome;  // "success" or "failure"
  std::int64_t failed_leg = -1;
  std::string diagnostics;
  /// Planner cost-to-come per leg (before smoothing).
  std::vector<double> leg_costs;
  double total_cost_mps = 0.0;
  double unsmoothed_cost_mps = 0.0;
  bool smoothed = false;
  double alpha_star = 0.0;
  bool socp_ok = false;
  double socp_cost_mps = 0.0;
  int smoothing_iterations = 0;
  double fuel_allocated_mps = 0.0;
  std::size_t burn_count = 0;
  double t_final_s = 0.0;
  double online_seconds = 0.0;
  RunCounters counters;
};

RunReport make_report(const RunOutcome& run, const PrecomputedGraphData& data);

/// With `include_timing` false the wall time is omitted so that repeated
/// runs produce identical bytes.
nlohmann::json report_to_json(const RunReport& r, bool include_timing);

/// Shortest round-trip decimal form, fixed across runs.
std::string format_double(double v);

/// t, dx, dy, dz, dvx_state, dvy_state, dvz_state at every dt grid point,
/// before and after each burn, and at the final time.
void write_traj_csv(std::ostream& out, const Plan& plan, const OrbitModel& model, double dt);
/// tau, dvx, dvy, dvz, norm, fuel_allocated.
void write_burns_csv(std::ostream& out, const Plan& plan);
/// Abort plan of each burn: certificate verdict and CAM parameters.
nlohmann::json cam_json(const Plan& plan);

/// report.json, traj.csv, burns.csv and cam.json next to `prefix`.
void write_run_files(const std::string& prefix, const RunOutcome& run, const RunReport& report,
                     const Scenario& s, bool include_timing);

void write_bench_csv(std::ostream& out, const std::vector<BenchCell>& cells);

}  // namespace cwhfmt

#endif  // CWHFMT_REPORT_HPP
