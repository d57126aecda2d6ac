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

// cwhfmt: offline precompute, online planning and sweep benchmarks.
//
// Exit codes: 0 success, 1 unexpected error, 2 invalid input (scenario,
// flags, data file), 3 sampling exhausted, 4 planner failure.

#include "cwhfmt/graph_io.hpp"
#include "cwhfmt/parallel.hpp"
#include "cwhfmt/pipeline.hpp"
#include "cwhfmt/report.hpp"
#include "cwhfmt/scenario.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace cwhfmt;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitSampling = 3;
constexpr int kExitPlanFailed = 4;

struct InvalidArgs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "lo:hi:count" or a single value.
std::vector<double> parse_range(const std::string& text, const std::string& what) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = text.find(':', start);
    parts.push_back(text.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  try {
    if (parts.size() == 1) return {std::stod(parts[0])};
    if (parts.size() == 3) {
      const double lo = std::stod(parts[0]);
      const double hi = std::stod(parts[1]);
      const int count = std::stoi(parts[2]);
      if (count < 1 || !(lo <= hi)) throw InvalidArgs(what + ": need lo <= hi and count >= 1");
      return linspace(lo, hi, count);
    }
  } catch (const std::logic_error&) {
  }
  throw InvalidArgs(what + ": expected <value> or <lo>:<hi>:<count>, got '" + text + "'");
}

int run_precompute(const std::string& scenario_path, const std::string& out_path,
                   const std::string& json_path) {
  const Scenario s = load_scenario(scenario_path);
  const PrecomputedGraphData data = precompute_scenario(s);
  if (json_path.empty()) {
    save_graph(out_path, data);
  } else {
    save_graph(out_path, json_path, data);
  }
  std::printf("legs %zu\nsamples %zu\nedges %zu\ncertified %zu\nfingerprint %016llx\n",
              data.legs.size(), data.total_samples(), data.total_edges(),
              data.total_certified(), static_cast<unsigned long long>(data.fingerprint));
  return kExitOk;
}

int run_plan(const std::string& scenario_path, const std::string& data_path, bool no_smooth,
             bool strict, const std::string& prefix, bool report_timing) {
  const Scenario s = load_scenario(scenario_path);
  const PrecomputedGraphData data = load_graph(data_path, scenario_fingerprint(s));
  RunOptions opt = run_options_for(s);
  if (no_smooth) opt.smooth = false;
  if (strict) opt.strict = true;
  const RunOutcome run = plan_scenario(s, data, opt);
  const RunReport report = make_report(run, data);
  write_run_files(prefix, run, report, s, report_timing);
  {
    std::ofstream t(prefix + ".timing.json", std::ios::trunc);
    t << "{\n  \"online_seconds\": " << format_double(run.online_seconds())
      << ",\n  \"planner_seconds\": " << format_double(run.planner_seconds)
      << ",\n  \"smoothing_seconds\": " << format_double(run.smoothing_seconds) << "\n}\n";
  }
  if (!run.success()) {
    std::printf("outcome failure\ndiagnostics %s\nonline_seconds %.3f\n", report.diagnostics.c_str(),
                run.online_seconds());
    return kExitPlanFailed;
  }
  std::printf("outcome success\ntotal_cost_mps %.6f\nunsmoothed_cost_mps %.6f\n"
              "fuel_allocated_mps %.6f\nonline_seconds %.3f\n",
              report.total_cost_mps, report.unsmoothed_cost_mps, report.fuel_allocated_mps,
              run.online_seconds());
  return kExitOk;
}

int run_bench(const std::string& scenario_path, const std::vector<std::string>& sweep,
              const std::string& out_path) {
  const Scenario s = load_scenario(scenario_path);
  std::vector<std::size_t> ns{s.planner.n * s.waypoints.size()};
  std::vector<double> js{s.planner.j_bar};
  for (const std::string& item : sweep) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgs("--sweep: expected key=range, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::vector<double> vals = parse_range(item.substr(eq + 1), "--sweep " + key);
    if (key == "n") {
      ns.clear();
      for (double v : vals) {
        if (!(v >= 2.0)) throw InvalidArgs("--sweep n: values must be >= 2");
        ns.push_back(static_cast<std::size_t>(std::llround(v)));
      }
    } else if (key == "jbar") {
      for (double v : vals) {
        if (!(v > 0.0)) throw InvalidArgs("--sweep jbar: values must be positive");
      }
      js = vals;
    } else {
      throw InvalidArgs("--sweep: unknown key '" + key + "' (expected n or jbar)");
    }
  }
  const std::vector<BenchCell> cells = run_sweep(s, ns, js);
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  write_bench_csv(out, cells);
  std::size_t ok = 0;
  for (const auto& c : cells) ok += c.success ? 1 : 0;
  std::printf("cells %zu\nsuccess %zu\n", cells.size(), ok);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault-tolerant impulsive rendezvous planner (CWH dynamics, FMT*).\n"
               "Environment: CWHFMT_THREADS caps the worker pool."};
  app.require_subcommand(1);

  std::string scenario;
  std::string out;
  std::string json_twin;
  std::string data;
  bool no_smooth = false;
  bool strict = false;
  bool report_timing = false;
  std::vector<std::string> sweep;

  auto* pre = app.add_subcommand("precompute", "Offline phase: sample, certify and connect every leg");
  pre->add_option("--scenario", scenario, "Scenario JSON file")->required();
  pre->add_option("--out", out, "Output graph data file (binary)")->required();
  pre->add_option("--json", json_twin, "Also write a JSON twin of the graph data here");

  auto* plan = app.add_subcommand("plan", "Online phase: plan, smooth and write results");
  plan->add_option("--scenario", scenario, "Scenario JSON file")->required();
  plan->add_option("--data", data, "Graph data file written by precompute")->required();
  plan->add_flag("--no-smooth", no_smooth, "Skip trajectory smoothing");
  plan->add_flag("--strict-safety", strict,
                 "Require a certified abort at every dt point of the final trajectory");
  plan->add_flag("--report-timing", report_timing,
                 "Include online_seconds in report.json (makes it run-dependent)");
  plan->add_option("--out", out,
                   "Output prefix: writes .traj.csv, .burns.csv, .report.json, .cam.json, "
                   ".timing.json")
      ->required();

  auto* bench = app.add_subcommand("bench", "Cost-vs-runtime sweep over sample count and J");
  bench->add_option("--scenario", scenario, "Scenario JSON file")->required();
  bench->add_option("--sweep", sweep,
                    "Sweep axes: n=<lo>:<hi>:<count> (total samples over all legs), "
                    "jbar=<lo>:<hi>:<count>; single values allowed")
      ->expected(1, 2);
  bench->add_option("--out", out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  configure_workers();
  try {
    if (*pre) return run_precompute(scenario, out, json_twin);
    if (*plan) return run_plan(scenario, data, no_smooth, strict, out, report_timing);
    if (*bench) return run_bench(scenario, sweep, out);
  } catch (const ScenarioError& e) {
    std::fprintf(stderr, "error: invalid scenario: %s\n", e.what());
    return kExitInvalid;
  } catch (const GraphIoError& e) {
    std::fprintf(stderr, "error: graph data: %s\n", e.what());
    return kExitInvalid;
  } catch (const InvalidArgs& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const SamplingExhausted& e) {
    std::fprintf(stderr, "error: sampling exhausted: %s\n", e.what());
    return kExitSampling;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
