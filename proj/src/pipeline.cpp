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

#include "cwhfmt/pipeline.hpp"

#include "cwhfmt/graph_io.hpp"
#include "cwhfmt/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>

namespace cwhfmt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

PrecomputedGraphData precompute_scenario(const Scenario& s, const PrecomputeOptions& options) {
  const SafetyContext ctx = s.safety_context();
  const ReachSpec reach = s.reach_spec();
  reach.limits.validate(ctx.model);
  PrecomputedGraphData data;
  data.fingerprint = scenario_fingerprint(s);
  data.d = s.planar ? 4 : 6;
  data.j_bar = reach.j_bar;
  for (const LegSpec& spec : s.leg_specs()) {
    data.legs.push_back(precompute_leg(spec, ctx, reach, options));
  }
  return data;
}

RunOptions run_options_for(const Scenario& s) {
  return RunOptions{s.smoothing.enabled, s.planner.strict_safety};
}

RunOutcome plan_scenario(const Scenario& s, const PrecomputedGraphData& data,
                         const RunOptions& options) {
  if (data.fingerprint != scenario_fingerprint(s)) {
    throw FingerprintMismatch("graph data was precomputed for a different scenario");
  }
  RunOutcome out;
  auto t0 = Clock::now();
  const SafetyContext ctx = s.safety_context();
  const ReachSpec reach = s.reach_spec();
  PlannerOptions popt = s.planner_options();
  popt.strict = options.strict;
  out.chain = chain_waypoints(s.initial_state, data, ctx, reach, popt);
  out.planner_seconds = seconds_since(t0);
  out.plan = out.chain.plan;
  out.unsmoothed_cost = out.plan.cost;
  if (!out.chain.success || !options.smooth) return out;

  t0 = Clock::now();
  const SmoothingProblem problem = smoothing_problem_for(ctx.model, out.plan, s.smoothing.alpha_tol, s.smoothing.mode);
  SmoothedPlan sm = smooth(out.plan, ctx, problem);
  if (sm.alpha_star > 0.0) {
    Plan p = apply_smoothing(out.plan, sm, ctx);
    bool keep = true;
    if (options.strict) {
      std::uint64_t pts = 0;
      keep = strict_violations(p, ctx, &pts) == 0;
    }
    if (keep) {
      out.plan = std::move(p);
    } else {
      sm.alpha_star = 0.0;
      sm.schedule = out.plan.schedule;
      sm.cost = out.plan.cost;
    }
  }
  out.smoothing = std::move(sm);
  out.smoothing_seconds = seconds_since(t0);
  return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v;
  if (count <= 1) {
    v.push_back(lo);
    return v;
  }
  for (int i = 0; i < count; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    // Snap to 12 significant digits so 0.2:0.4:5 yields 0.3, not 0.30000000000000004.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    v.push_back(std::strtod(buf, nullptr));
  }
  return v;
}

std::vector<BenchCell> run_sweep(const Scenario& base, const std::vector<std::size_t>& n_values,
                                 const std::vector<double>& j_values) {
  std::vector<BenchCell> cells;
  for (std::size_t n : n_values) {
    for (double j : j_values) {
      BenchCell c;
      c.n_total = n;
      c.j_bar = j;
      cells.push_back(c);
    }
  }
  const auto legs = static_cast<double>(base.waypoints.size());
  const long long count = static_cast<long long>(cells.size());

#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (long long k = 0; k < count; ++k) {
    BenchCell& c = cells[static_cast<std::size_t>(k)];
    Scenario s = base;
    s.planner.n = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(static_cast<double>(c.n_total) / legs)));
    s.planner.j_bar = c.j_bar;
    try {
      const PrecomputedGraphData data = precompute_scenario(s);
      RunOptions opt = run_options_for(s);
      opt.smooth = true;
      const RunOutcome run = plan_scenario(s, data, opt);
      c.success = run.success();
      c.outcome = run.success() ? "success" : "failure";
      c.unsmoothed_cost = run.unsmoothed_cost;
      c.smoothed_cost = run.plan.cost;
      c.planner_seconds = run.planner_seconds;
      c.online_seconds = run.online_seconds();
      if (run.smoothing) {
        for (double e : run.smoothing->accepted_bc_errors) {
          c.max_bc_error = std::max(c.max_bc_error, e);
        }
      }
    } catch (const SamplingExhausted&) {
      c.outcome = "sampling_exhausted";
    } catch (const std::exception&) {
      c.outcome = "error";
    }
  }
  return cells;
}

}  // namespace cwhfmt
