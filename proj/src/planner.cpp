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

#include "cwhfmt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace cwhfmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Tag : std::uint8_t { Unexplored, Frontier, Interior, Dropped };

}  // namespace

std::size_t PrecomputedGraphData::total_samples() const {
  std::size_t n = 0;
  for (const auto& l : legs) n += l.samples.states.size();
  return n;
}

std::size_t PrecomputedGraphData::total_edges() const {
  std::size_t n = 0;
  for (const auto& l : legs) n += l.nbrs.edges.size();
  return n;
}

std::size_t PrecomputedGraphData::total_certified() const {
  std::size_t n = 0;
  for (const auto& l : legs) {
    for (const auto& c : l.samples.certificates) n += c.safe ? 1 : 0;
  }
  return n;
}

LegData precompute_leg(const LegSpec& spec, const SafetyContext& ctx, const ReachSpec& reach,
                       const PrecomputeOptions& options) {
  LegData leg;
  leg.space = spec.space;
  leg.goal = spec.goal;
  leg.samples = sample_free(spec.space, spec.n, ctx, spec.goal, spec.n_goal, options.sampling);
  if (spec.exact) {
    const State g = spec.goal.center;
    if (!point_feasible(g, ctx.env)) {
      throw std::runtime_error("precompute: exact goal state is not collision-free");
    }
    CamCertificate cert = certify_state(ctx, g);
    if (!cert.safe) throw std::runtime_error("precompute: exact goal state is not certified safe");
    leg.goal_index = static_cast<std::int64_t>(leg.samples.states.size());
    leg.samples.states.push_back(g);
    leg.samples.certificates.push_back(std::move(cert));
  }
  leg.nbrs = build_neighbor_sets(ctx.model, leg.samples.states, reach, options.neighbors);
  return leg;
}

Impulse merge_junction(const Impulse& dv_in, const Impulse& dv_out) {
  if (dv_in.tau != dv_out.tau) {
    throw std::invalid_argument("merge_junction: impulses must share the same time");
  }
  return Impulse{dv_in.dv + dv_out.dv, dv_in.tau};
}

LegResult fmt_plan(const State& x_init, const Vec3& root_incoming, std::uint32_t leg_index,
                   const LegData& leg, const SafetyContext& ctx, const ReachSpec& reach,
                   const PlannerOptions& options) {
  LegResult res;
  const auto& states = leg.samples.states;
  const auto N = static_cast<std::uint32_t>(states.size());
  const std::uint32_t root = N;

  auto state_of = [&](std::uint32_t i) -> const State& { return i == root ? x_init : states[i]; };
  auto in_goal = [&](std::uint32_t i) {
    if (leg.goal_index >= 0) {
      return i == root ? x_init == leg.goal.center
                       : static_cast<std::int64_t>(i) == leg.goal_index;
    }
    return leg.goal.contains(state_of(i));
  };

  if (in_goal(root)) {
    res.success = true;
    res.x_final = x_init;
    return res;
  }

  const SteeringKernel kernel(ctx.model, reach.limits);
  const std::vector<Edge> root_row = forward_row(kernel, x_init, states, reach.j_bar, root);
  res.stats.root_neighbors = root_row.size();
  std::vector<std::int64_t> root_edge_to(N, -1);
  for (std::size_t k = 0; k < root_row.size(); ++k) {
    root_edge_to[root_row[k].to] = static_cast<std::int64_t>(k);
  }

  std::vector<double> cost(N + 1, kInf);
  std::vector<std::uint32_t> parent(N + 1, root);
  std::vector<const SteeringSolution*> parent_sol(N + 1, nullptr);
  std::vector<Vec3> dv_in(N + 1, Vec3::Zero());
  std::vector<Tag> tag(N + 1, Tag::Unexplored);
  const FailureMask healthy = all_healthy(ctx.config.size());

  cost[root] = 0.0;
  tag[root] = Tag::Frontier;
  dv_in[root] = options.merge ? root_incoming : Vec3::Zero();
  std::set<std::pair<double, std::uint32_t>> frontier{{0.0, root}};

  auto increment = [&](std::uint32_t y, const SteeringSolution& s) {
    if (!options.merge) return s.cost;
    const Vec3& in = dv_in[y];
    return (in + s.dv1.dv).norm() - in.norm() + s.dv2.dv.norm();
  };

  auto collision_free = [&](std::uint32_t y, std::uint32_t x, const SteeringSolution& s) {
    const State& sy = state_of(y);
    if (!trajectory_feasible(ctx.model, sy, s.schedule(), s.T, ctx.env, ctx.dt)) return false;
    const Vec3 departure = (options.merge ? dv_in[y] : Vec3::Zero()) + s.dv1.dv;
    if (!nadir_burn(sy, departure, ctx.config, healthy, ctx.env)) return false;
    State arrive = states[x];
    arrive.tail<3>() -= s.dv2.dv;
    if (!nadir_burn(arrive, s.dv2.dv, ctx.config, healthy, ctx.env)) return false;
    // Abort from the intercept state: finish the rendezvous, then the
    // sample's own CAM.
    const CamCertificate cert =
        extend_with_prefix(ctx, leg.samples.certificates[x], arrive, s.dv2.dv);
    return cert.safe;
  };

  std::vector<std::uint32_t> opened;
  while (true) {
    if (frontier.empty()) {
      res.diagnostics = "leg " + std::to_string(leg_index) + ": frontier exhausted";
      return res;
    }
    const std::uint32_t z = frontier.begin()->second;
    if (z != root && in_goal(z)) break;
    ++res.stats.nodes_expanded;

    opened.clear();
    auto visit = [&](std::uint32_t x) {
      if (tag[x] != Tag::Unexplored) return;
      double best = kInf;
      std::uint32_t best_y = root;
      const SteeringSolution* best_s = nullptr;
      auto consider = [&](std::uint32_t y, const SteeringSolution& s) {
        if (tag[y] != Tag::Frontier) return;
        const double c = cost[y] + increment(y, s);
        if (c < best || (c == best && y < best_y)) {
          best = c;
          best_y = y;
          best_s = &s;
        }
      };
      for (std::uint32_t e : leg.nbrs.bwd[x]) consider(leg.nbrs.edges[e].from, leg.nbrs.edges[e].sol);
      if (root_edge_to[x] >= 0) consider(root, root_row[static_cast<std::size_t>(root_edge_to[x])].sol);
      if (!best_s) return;
      ++res.stats.connection_attempts;
      if (collision_free(best_y, x, *best_s)) {
        cost[x] = best;
        parent[x] = best_y;
        parent_sol[x] = best_s;
        dv_in[x] = best_s->dv2.dv;
        tag[x] = Tag::Frontier;
        opened.push_back(x);
      } else {
        ++res.stats.connections_rejected;
        tag[x] = Tag::Dropped;
      }
    };
    if (z == root) {
      for (const auto& e : root_row) visit(e.to);
    } else {
      for (std::uint32_t e : leg.nbrs.fwd[z]) visit(leg.nbrs.edges[e].to);
    }
    frontier.erase(frontier.begin());
    tag[z] = Tag::Interior;
    for (std::uint32_t x : opened) frontier.emplace(cost[x], x);
  }

  const std::uint32_t goal = frontier.begin()->second;
  std::vector<std::uint32_t> path;
  for (std::uint32_t v = goal; v != root; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  double t = 0.0;
  std::uint32_t prev = root;
  for (std::uint32_t v : path) {
    PlanEdge e;
    e.leg = leg_index;
    e.from = prev == root ? -1 : static_cast<std::int64_t>(prev);
    e.to = static_cast<std::int64_t>(v);
    e.sol = *parent_sol[v];
    e.t_start = t;
    t += e.sol.T;
    res.edges.push_back(e);
    prev = v;
  }
  res.success = true;
  res.x_final = states[goal];
  res.cost_to_come = cost[goal];
  return res;
}

std::vector<PlannedBurn> assemble_burns(const std::vector<PlanEdge>& edges, bool merge) {
  std::vector<PlannedBurn> out;
  auto push = [&](const PlannedBurn& b) {
    if (!b.imp.dv.isZero(0.0)) out.push_back(b);
  };
  bool have_pending = false;
  PlannedBurn pending;
  for (const auto& e : edges) {
    PlannedBurn dep{Impulse{e.sol.dv1.dv, e.t_start}, Vec3::Zero()};
    if (have_pending) {
      if (merge && pending.imp.tau == dep.imp.tau) {
        dep.imp = merge_junction(pending.imp, dep.imp);
        dep.arrival = pending.arrival;
      } else {
        push(pending);
      }
    }
    push(dep);
    pending = PlannedBurn{Impulse{e.sol.dv2.dv, e.t_start + e.sol.T}, e.sol.dv2.dv};
    have_pending = true;
  }
  if (have_pending) push(pending);
  return out;
}

void annotate_plan(Plan& plan, const SafetyContext& ctx) {
  plan.allocations.clear();
  plan.certificates.clear();
  plan.fuel = 0.0;
  const FailureMask healthy = all_healthy(ctx.config.size());
  State x = plan.x_init;
  double t = 0.0;
  for (const auto& b : plan.burns) {
    x = propagate_coast(ctx.model, x, b.imp.tau - t);
    t = b.imp.tau;
    const Mat3 R = attitude_policy(x);
    auto alloc = try_allocate(R * b.imp.dv, Vec3::Zero(), ctx.config, healthy);
    if (alloc) {
      plan.fuel += alloc->fuel;
      plan.allocations.push_back(*alloc);
    } else {
      plan.fuel = kInf;
      plan.allocations.push_back(AllocationResult{Eigen::VectorXd(), kInf});
    }
    plan.certificates.push_back(certify_with_prefix(ctx, x, b.arrival));
    x.tail<3>() += b.imp.dv;
  }
}

std::uint64_t strict_violations(const Plan& plan, const SafetyContext& ctx,
                                std::uint64_t* points_checked) {
  std::uint64_t bad = 0;
  std::uint64_t pts = 0;
  walk_trajectory(ctx.model, plan.x_init, plan.schedule, plan.t_final, ctx.dt,
                  [&](double, const State& x) {
                    ++pts;
                    if (!certify_state(ctx, x).safe) ++bad;
                    return true;
                  });
  if (points_checked) *points_checked = pts;
  return bad;
}

ChainResult chain_waypoints(const State& x_init, const PrecomputedGraphData& data,
                            const SafetyContext& ctx, const ReachSpec& reach,
                            const PlannerOptions& options) {
  ChainResult out;
  out.plan.x_init = x_init;
  State x = x_init;
  Vec3 incoming = Vec3::Zero();
  double t_offset = 0.0;
  for (std::uint32_t i = 0; i < data.legs.size(); ++i) {
    LegResult r = fmt_plan(x, incoming, i, data.legs[i], ctx, reach, options);
    out.stats.nodes_expanded += r.stats.nodes_expanded;
    out.stats.connection_attempts += r.stats.connection_attempts;
    out.stats.connections_rejected += r.stats.connections_rejected;
    out.stats.root_neighbors += r.stats.root_neighbors;
    if (!r.success) {
      out.failed_leg = i;
      out.diagnostics = r.diagnostics;
      return out;
    }
    for (auto& e : r.edges) {
      e.t_start += t_offset;
      out.plan.edges.push_back(e);
    }
    if (!r.edges.empty()) {
      t_offset = r.edges.back().t_start + r.edges.back().sol.T;
      incoming = r.edges.back().sol.dv2.dv;
    }
    out.leg_costs.push_back(r.cost_to_come);
    x = r.x_final;
  }
  Plan& plan = out.plan;
  plan.burns = assemble_burns(plan.edges, options.merge);
  for (const auto& b : plan.burns) plan.schedule.append(b.imp);
  plan.t_final = t_offset;
  plan.x_final = propagate_schedule(ctx.model, x_init, plan.schedule, plan.t_final);
  plan.cost = plan.schedule.cost();
  annotate_plan(plan, ctx);
  if (options.strict) {
    out.stats.strict_violations = strict_violations(plan, ctx, &out.stats.strict_points);
    if (out.stats.strict_violations > 0) {
      out.diagnostics = "strict safety: " + std::to_string(out.stats.strict_violations) +
                        " trajectory states without a certified abort";
      return out;
    }
  }
  out.success = true;
  return out;
}

}  // namespace cwhfmt
