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

// OpenMP kernels against their serial reference on the first leg of the
// default scenario.  CWHFMT_THREADS caps the worker count.

#include "cwhfmt/parallel.hpp"
#include "cwhfmt/reachability.hpp"
#include "cwhfmt/sampling.hpp"
#include "cwhfmt/scenario.hpp"

#include <benchmark/benchmark.h>

#include <map>
#include <string>

namespace {

using namespace cwhfmt;

struct Leg {
  Scenario scenario;
  SafetyContext ctx;
  ReachSpec reach;
  LegSpec spec;
};

const Leg& leg() {
  static const Leg l = [] {
    Scenario s = load_scenario(CWHFMT_SOURCE_DIR "/scenarios/default_planar.json");
    return Leg{s, s.safety_context(), s.reach_spec(), s.leg_specs().front()};
  }();
  return l;
}

// Shared sample set per size, drawn once.
const SampleSet& samples(std::size_t n) {
  static std::map<std::size_t, SampleSet> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const Leg& l = leg();
    it = cache.emplace(n, sample_free(l.spec.space, n, l.ctx, l.spec.goal, 0)).first;
  }
  return it->second;
}

void neighbor_sets(benchmark::State& state, Exec exec, bool prune) {
  const Leg& l = leg();
  const auto& xs = samples(static_cast<std::size_t>(state.range(0))).states;
  NeighborBuildOptions opt;
  opt.exec = exec;
  opt.prune = prune;
  std::size_t edges = 0;
  for (auto _ : state) {
    const NeighborSets ns = build_neighbor_sets(l.ctx.model, xs, l.reach, opt);
    edges = ns.edges.size();
    benchmark::DoNotOptimize(edges);
  }
  state.counters["edges"] = static_cast<double>(edges);
  state.counters["pairs/s"] = benchmark::Counter(
      static_cast<double>(xs.size() * xs.size()), benchmark::Counter::kIsIterationInvariantRate);
}

void screening(benchmark::State& state, Exec exec) {
  const Leg& l = leg();
  SamplingOptions opt;
  opt.exec = exec;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t draws = 0;
  for (auto _ : state) {
    const SampleSet set = sample_free(l.spec.space, n, l.ctx, l.spec.goal, 0, opt);
    draws = set.draws;
    benchmark::DoNotOptimize(draws);
  }
  state.counters["draws"] = static_cast<double>(draws);
}

}  // namespace

BENCHMARK_CAPTURE(neighbor_sets, serial_unpruned, Exec::Serial, false)
    ->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(neighbor_sets, serial, Exec::Serial, true)
    ->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(neighbor_sets, parallel, Exec::Parallel, true)
    ->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(screening, serial, Exec::Serial)
    ->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(screening, parallel, Exec::Parallel)
    ->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond)->UseRealTime();

int main(int argc, char** argv) {
  configure_workers();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::AddCustomContext("workers", std::to_string(worker_count()));
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
