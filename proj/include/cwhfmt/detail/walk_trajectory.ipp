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

// Included from cwh.hpp.

#include <cmath>
#include <cstddef>

namespace cwhfmt {

template <typename Visitor>
bool walk_trajectory(const OrbitModel& model, const State& x0,
                     const BurnSchedule& schedule, double t_end, double dt,
                     Visitor&& visit) {
  // States are always propagated from the most recent event (start or burn)
  // so that error does not accumulate along long arcs.
  State anchor = x0;
  double t_anchor = 0.0;
  std::size_t next_burn = 0;
  const auto& imps = schedule.impulses;
  const std::size_t n_imp = imps.size();

  auto state_at = [&](double t) {
    return t == t_anchor ? anchor : propagate_coast(model, anchor, t - t_anchor);
  };

  const auto n_grid = static_cast<long long>(std::floor(t_end / dt + 1e-12));
  long long k = 0;
  double t_last_emitted = -1.0;
  while (true) {
    const double tg = k <= n_grid ? static_cast<double>(k) * dt : t_end;
    const bool grid_done = k > n_grid;
    const bool burns_left = next_burn < n_imp && imps[next_burn].tau <= t_end;
    if (burns_left && (grid_done || imps[next_burn].tau < tg)) {
      const double tb = imps[next_burn].tau;
      State x = state_at(tb);
      if (!visit(tb, static_cast<const State&>(x))) return false;
      while (next_burn < n_imp && imps[next_burn].tau == tb) {
        x.tail<3>() += imps[next_burn].dv;
        ++next_burn;
        if (!visit(tb, static_cast<const State&>(x))) return false;
      }
      anchor = x;
      t_anchor = tb;
      t_last_emitted = tb;
      continue;
    }
    if (grid_done) break;
    // Grid point (pre-burn when it coincides with an impulse time).
    const State x = state_at(tg);
    if (!visit(tg, x)) return false;
    t_last_emitted = tg;
    ++k;
  }
  if (t_last_emitted < t_end) {
    const State x = state_at(t_end);
    if (!visit(t_end, x)) return false;
  }
  return true;
}

}  // namespace cwhfmt
