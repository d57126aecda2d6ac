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

#include "cwhfmt/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace cwhfmt {

using nlohmann::json;

namespace {

template <int N>
json arr(const Eigen::Matrix<double, N, 1>& v) {
  json a = json::array();
  for (int i = 0; i < N; ++i) a.push_back(v(i));
  return a;
}

// Non-finite values are not valid JSON numbers.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

RunReport make_report(const RunOutcome& run, const PrecomputedGraphData& data) {
  RunReport r;
  const ChainResult& c = run.chain;
  r.outcome = c.success ? "success" : "failure";
  r.failed_leg = c.failed_leg;
  r.diagnostics = c.diagnostics;
  r.leg_costs = c.leg_costs;
  r.unsmoothed_cost_mps = run.unsmoothed_cost;
  r.counters.samples = data.total_samples();
  r.counters.edges = data.total_edges();
  r.counters.certified = data.total_certified();
  r.counters.nodes_expanded = c.stats.nodes_expanded;
  r.counters.connection_attempts = c.stats.connection_attempts;
  r.counters.connections_rejected = c.stats.connections_rejected;
  r.counters.root_neighbors = c.stats.root_neighbors;
  r.counters.strict_points = c.stats.strict_points;
  r.counters.strict_violations = c.stats.strict_violations;
  r.online_seconds = run.online_seconds();
  if (c.success) {
    r.total_cost_mps = run.plan.cost;
    r.fuel_allocated_mps = run.plan.fuel;
    r.burn_count = run.plan.burns.size();
    r.t_final_s = run.plan.t_final;
    if (run.smoothing) {
      r.smoothed = run.smoothing->alpha_star > 0.0;
      r.alpha_star = run.smoothing->alpha_star;
      r.socp_ok = run.smoothing->socp_ok;
      r.socp_cost_mps = run.smoothing->socp_cost;
      r.smoothing_iterations = run.smoothing->iterations;
    }
  }
  return r;
}

json report_to_json(const RunReport& r, bool include_timing) {
  json j;
  j["outcome"] = r.outcome;
  j["failed_leg"] = r.failed_leg;
  j["diagnostics"] = r.diagnostics;
  json legs = json::array();
  for (double v : r.leg_costs) legs.push_back(num(v));
  j["leg_costs_mps"] = legs;
  j["total_cost_mps"] = num(r.total_cost_mps);
  j["unsmoothed_cost_mps"] = num(r.unsmoothed_cost_mps);
  j["smoothed"] = r.smoothed;
  j["alpha_star"] = r.alpha_star;
  j["socp_ok"] = r.socp_ok;
  j["socp_cost_mps"] = num(r.socp_cost_mps);
  j["smoothing_iterations"] = r.smoothing_iterations;
  j["fuel_allocated_mps"] = num(r.fuel_allocated_mps);
  j["burn_count"] = r.burn_count;
  j["t_final_s"] = r.t_final_s;
  if (include_timing) j["online_seconds"] = r.online_seconds;
  const RunCounters& k = r.counters;
  j["counters"] = {{"samples", k.samples},
                   {"edges", k.edges},
                   {"certified", k.certified},
                   {"nodes_expanded", k.nodes_expanded},
                   {"connection_attempts", k.connection_attempts},
                   {"connections_rejected", k.connections_rejected},
                   {"root_neighbors", k.root_neighbors},
                   {"strict_points", k.strict_points},
                   {"strict_violations", k.strict_violations}};
  return j;
}

void write_traj_csv(std::ostream& out, const Plan& plan, const OrbitModel& model, double dt) {
  out << "t,dx,dy,dz,dvx_state,dvy_state,dvz_state\n";
  walk_trajectory(model, plan.x_init, plan.schedule, plan.t_final, dt,
                  [&](double t, const State& x) {
                    out << format_double(t);
                    for (int i = 0; i < 6; ++i) out << ',' << format_double(x(i));
                    out << '\n';
                    return true;
                  });
}

void write_burns_csv(std::ostream& out, const Plan& plan) {
  out << "tau,dvx,dvy,dvz,norm,fuel_allocated\n";
  for (std::size_t i = 0; i < plan.schedule.size(); ++i) {
    const Impulse& imp = plan.schedule.impulses[i];
    const double fuel = i < plan.allocations.size() ? plan.allocations[i].fuel : NAN;
    out << format_double(imp.tau) << ',' << format_double(imp.dv(0)) << ','
        << format_double(imp.dv(1)) << ',' << format_double(imp.dv(2)) << ','
        << format_double(imp.dv.norm()) << ',' << format_double(fuel) << '\n';
  }
}

json cam_json(const Plan& plan) {
  json burns = json::array();
  for (std::size_t i = 0; i < plan.burns.size(); ++i) {
    const PlannedBurn& b = plan.burns[i];
    json e = {{"index", i},
              {"tau", b.imp.tau},
              {"dv", arr<3>(b.imp.dv)},
              {"rendezvous_prefix_dv", arr<3>(b.arrival)}};
    if (i < plan.certificates.size()) {
      const CamCertificate& c = plan.certificates[i];
      e["safe"] = c.safe;
      e["reason"] = std::string(to_string(c.reason));
      e["modes_ok"] = c.feasible_count();
      e["modes"] = c.mode_ok.size();
      e["first_failed_mode"] = c.first_failed_mode;
      if (c.cam) {
        e["cam"] = {{"theta_star", c.cam->theta_star},
                    {"coast_s", c.cam->Th},
                    {"theta_max", c.cam->theta_max},
                    {"dv_circ", arr<3>(c.cam->dv_circ.dv)},
                    {"dv_circ_norm", c.cam->dv_circ.dv.norm()},
                    {"pre_burn", arr<6>(c.cam->pre_burn)},
                    {"post_state", arr<6>(c.cam->post_state)}};
      } else {
        e["cam"] = nullptr;
      }
    }
    burns.push_back(e);
  }
  return json{{"burns", burns}};
}

void write_run_files(const std::string& prefix, const RunOutcome& run, const RunReport& report,
                     const Scenario& s, bool include_timing) {
  {
    auto f = open_out(prefix + ".report.json");
    f << report_to_json(report, include_timing).dump(2) << '\n';
  }
  {
    auto f = open_out(prefix + ".traj.csv");
    if (run.success()) {
      write_traj_csv(f, run.plan, s.model(), s.dt());
    } else {
      f << "t,dx,dy,dz,dvx_state,dvy_state,dvz_state\n";
    }
  }
  {
    auto f = open_out(prefix + ".burns.csv");
    if (run.success()) {
      write_burns_csv(f, run.plan);
    } else {
      f << "tau,dvx,dvy,dvz,norm,fuel_allocated\n";
    }
  }
  {
    auto f = open_out(prefix + ".cam.json");
    f << (run.success() ? cam_json(run.plan) : json{{"burns", json::array()}}).dump(2) << '\n';
  }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchCell>& cells) {
  out << "n,j_bar,smoothed,cost,online_seconds,outcome\n";
  for (const BenchCell& c : cells) {
    out << c.n_total << ',' << format_double(c.j_bar) << ",0,"
        << (c.success ? format_double(c.unsmoothed_cost) : std::string()) << ','
        << format_double(c.planner_seconds) << ',' << c.outcome << '\n';
    out << c.n_total << ',' << format_double(c.j_bar) << ",1,"
        << (c.success ? format_double(c.smoothed_cost) : std::string()) << ','
        << format_double(c.online_seconds) << ',' << c.outcome << '\n';
  }
}

}  // namespace cwhfmt
