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

#include "cwhfmt/smoothing.hpp"

#include "cwhfmt/geometry.hpp"

#include <cmath>

namespace cwhfmt {

SmoothingProblem smoothing_problem_for(const OrbitModel& model, const Plan& plan, double alpha_tol,
                                       SmoothingMode mode) {
  SmoothingProblem p;
  p.x_init = plan.x_init;
  p.x_goal = plan.x_final;
  p.t_final = plan.t_final;
  p.alpha_tol = alpha_tol;
  for (const auto& imp : plan.schedule.impulses) p.taus.push_back(imp.tau);
  for (const auto& b : plan.burns) p.rendezvous_prefix.push_back(b.arrival);
  if (mode == SmoothingMode::PerLeg) {
    for (std::size_t i = 0; i + 1 < plan.edges.size(); ++i) {
      if (plan.edges[i].leg == plan.edges[i + 1].leg) continue;
      const double t = plan.edges[i].t_start + plan.edges[i].sol.T;
      if (t >= plan.t_final) continue;
      p.pass_through.push_back(
          PassThrough{t, position(propagate_schedule(model, plan.x_init, plan.schedule, t))});
    }
  }
  return p;
}

BurnSchedule min_fuel_fixed_times(const OrbitModel& model, const SmoothingProblem& problem,
                                  const SocpOptions& options, SocpResult* info) {
  if (problem.taus.size() < 2) throw std::invalid_argument("min_fuel_fixed_times: need >= 2 burns");
  const auto nt = static_cast<Eigen::Index>(problem.taus.size());
  const auto np = static_cast<Eigen::Index>(problem.pass_through.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(6 + 3 * np, 3 * nt);
  Eigen::VectorXd b(6 + 3 * np);
  M.topRows<6>() = stacked_impulse_matrix(model, problem.t_final, problem.taus);
  b.head<6>() = problem.x_goal - propagate_coast(model, problem.x_init, problem.t_final);
  for (Eigen::Index k = 0; k < np; ++k) {
    const PassThrough& c = problem.pass_through[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < nt; ++i) {
      const double tau = problem.taus[static_cast<std::size_t>(i)];
      // Burns at or after t do not move the position at t.
      if (tau < c.t) M.block<3, 3>(6 + 3 * k, 3 * i) = stm_rv(model, c.t - tau);
    }
    b.segment<3>(6 + 3 * k) = c.position - position(propagate_coast(model, problem.x_init, c.t));
  }
  SocpResult r = solve_block_norm_socp(M, b, problem.dv_max, options);
  if (info) *info = r;
  if (!r.equality_consistent || !r.converged) {
    throw InfeasibleSOCP("min_fuel_fixed_times: no schedule meets the boundary conditions");
  }
  BurnSchedule s;
  for (std::size_t i = 0; i < problem.taus.size(); ++i) {
    s.append(Impulse{r.u.segment<3>(3 * static_cast<Eigen::Index>(i)), problem.taus[i]});
  }
  return s;
}

BurnSchedule blend_schedules(double alpha, const BurnSchedule& a, const BurnSchedule& b) {
  if (a.size() != b.size()) throw std::invalid_argument("blend_schedules: size mismatch");
  BurnSchedule out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.impulses[i].tau != b.impulses[i].tau) {
      throw std::invalid_argument("blend_schedules: burn times differ");
    }
    // Exact endpoints keep alpha = 0 bit-identical to the input plan.
    Vec3 dv;
    if (alpha == 0.0) {
      dv = a.impulses[i].dv;
    } else if (alpha == 1.0) {
      dv = b.impulses[i].dv;
    } else {
      dv = (1.0 - alpha) * a.impulses[i].dv + alpha * b.impulses[i].dv;
    }
    out.append(Impulse{dv, a.impulses[i].tau});
  }
  return out;
}

State convex_combination_state(const OrbitModel& model, double alpha, const State& x_init,
                               const BurnSchedule& plan_sched,
                               const BurnSchedule& dagger_sched, double t) {
  return propagate_schedule(model, x_init, blend_schedules(alpha, plan_sched, dagger_sched), t);
}

bool smoothing_candidate_ok(double alpha, const BurnSchedule& sched,
                            const SmoothingProblem& problem, const SafetyContext& ctx,
                            std::vector<Vec3>* prefixes) {
  if (!trajectory_feasible(ctx.model, problem.x_init, sched, problem.t_final, ctx.env, ctx.dt)) {
    return false;
  }
  const FailureMask healthy = all_healthy(ctx.config.size());
  if (prefixes) prefixes->clear();
  State x = problem.x_init;
  double t = 0.0;
  for (std::size_t i = 0; i < sched.size(); ++i) {
    const Impulse& imp = sched.impulses[i];
    x = propagate_coast(ctx.model, x, imp.tau - t);
    t = imp.tau;
    if (!nadir_burn(x, imp.dv, ctx.config, healthy, ctx.env)) return false;
    // At alpha = 0 the blended prefix is the planner's own rendezvous burn,
    // so the input plan always passes.
    const Vec3 blended = i < problem.rendezvous_prefix.size()
                             ? Vec3((1.0 - alpha) * problem.rendezvous_prefix[i])
                             : Vec3::Zero();
    Vec3 used = blended;
    if (!certify_with_prefix(ctx, x, blended).safe) {
      if (blended == imp.dv || !certify_with_prefix(ctx, x, imp.dv).safe) return false;
      used = imp.dv;
    }
    if (prefixes) prefixes->push_back(used);
    x.tail<3>() += imp.dv;
  }
  return true;
}

SmoothedPlan smooth(const Plan& plan, const SafetyContext& ctx, const SmoothingProblem& problem,
                    const SocpOptions& options) {
  SmoothedPlan out;
  out.schedule = plan.schedule;
  out.cost = plan.schedule.cost();
  if (plan.schedule.size() < 2) return out;

  BurnSchedule dagger;
  try {
    dagger = min_fuel_fixed_times(ctx.model, problem, options);
  } catch (const InfeasibleSOCP&) {
    return out;
  }
  out.socp_ok = true;
  out.socp_cost = dagger.cost();

  double alpha = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (true) {
    ++out.iterations;
    out.tried_alphas.push_back(alpha);
    BurnSchedule cand = blend_schedules(alpha, plan.schedule, dagger);
    // The cost bound guards against an inexact SOCP solution.
    std::vector<Vec3> prefixes;
    if (cand.cost() <= plan.schedule.cost() &&
        smoothing_candidate_ok(alpha, cand, problem, ctx, &prefixes)) {
      lo = alpha;
      const State xf = propagate_schedule(ctx.model, problem.x_init, cand, problem.t_final);
      out.accepted_bc_errors.push_back((xf - problem.x_goal).cwiseAbs().maxCoeff());
      out.alpha_star = alpha;
      out.schedule = std::move(cand);
      out.cost = out.schedule.cost();
      out.abort_prefix = std::move(prefixes);
    } else {
      hi = alpha;
    }
    if (hi - lo < problem.alpha_tol) break;
    alpha = 0.5 * (lo + hi);
  }
  return out;
}

Plan apply_smoothing(const Plan& plan, const SmoothedPlan& sm, const SafetyContext& ctx) {
  if (sm.alpha_star == 0.0) return plan;
  Plan p = plan;
  p.schedule = sm.schedule;
  p.burns.clear();
  for (std::size_t i = 0; i < sm.schedule.size(); ++i) {
    const Vec3 prefix = i < sm.abort_prefix.size() ? sm.abort_prefix[i] : sm.schedule.impulses[i].dv;
    p.burns.push_back(PlannedBurn{sm.schedule.impulses[i], prefix});
  }
  p.cost = sm.schedule.cost();
  p.x_final = propagate_schedule(ctx.model, p.x_init, p.schedule, p.t_final);
  annotate_plan(p, ctx);
  return p;
}

}  // namespace cwhfmt
