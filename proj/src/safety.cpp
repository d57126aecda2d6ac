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

#include "cwhfmt/safety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace cwhfmt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Band-edge candidates aim slightly outside the closed KOZ so that the
// resulting circular orbit does not graze its boundary.
constexpr double kEdgeMargin = 1e-6;

double band_half_width(const Environment& env) {
  return env.koz() ? env.koz()->semi_axes(0) : 0.0;
}

bool outside_band(double dx, double rho) { return rho <= 0.0 || std::abs(dx) > rho; }

// First anomaly at which the free coast touches the KOZ (dt scan followed by
// bisection); 2 pi when it never does within one revolution.
double first_koz_contact(const OrbitModel& model, const State& x0, const Environment& env,
                         double dt) {
  if (!env.koz()) return kTwoPi;
  const double w = model.omega();
  const double t_end = kTwoPi / w;
  const auto steps = static_cast<long long>(std::ceil(t_end / dt));
  double t_prev = 0.0;
  for (long long k = 1; k <= steps; ++k) {
    const double t = std::min(static_cast<double>(k) * dt, t_end);
    if (env.koz()->contains(propagate_coast(model, x0, t).head<3>())) {
      double lo = t_prev;
      double hi = t;
      for (int it = 0; it < 80 && hi - lo > 1e-9 * dt; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (env.koz()->contains(propagate_coast(model, x0, mid).head<3>())) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return w * lo;
    }
    t_prev = t;
  }
  return kTwoPi;
}

void push_periodic(std::vector<double>& out, double base, double period, double hi) {
  double t = std::fmod(base, period);
  if (t < 0.0) t += period;
  for (; t <= hi; t += period) out.push_back(t);
}

}  // namespace

bool is_invariant(const OrbitModel& model, const State& x, const InvariantSetSpec& spec,
                  double tol) {
  const double w = model.omega();
  return std::abs(x(0)) >= spec.rho_x && std::abs(x(3)) <= tol &&
         std::abs(x(4) + 1.5 * w * x(0)) <= tol;
}

Impulse circularization_burn(const OrbitModel& model, const State& x) {
  Impulse imp;
  imp.dv = Vec3(-x(3), -1.5 * model.omega() * x(0) - x(4), -x(5));
  return imp;
}

double circularization_cost_sq(const OrbitModel& model, const State& x0, double theta) {
  const State x = propagate_coast(model, x0, theta / model.omega());
  return circularization_burn(model, x).dv.squaredNorm();
}

double circularization_cost_slope(const OrbitModel& model, const State& x0, double theta) {
  const double w = model.omega();
  const double a = 3.0 * w * x0(0) + 2.0 * x0(4);
  const double vx = x0(3);
  const double z = x0(2);
  const double vz = x0(5);
  const double ks = 0.75 * a * a - 0.75 * vx * vx + w * w * z * z - vz * vz;
  const double kc = 1.5 * vx * a - 2.0 * w * vz * z;
  return ks * std::sin(2.0 * theta) + kc * std::cos(2.0 * theta);
}

std::vector<double> cam_candidates(const OrbitModel& model, const State& x0,
                                   const Environment& env, double dt, double* theta_max_out) {
  const double w = model.omega();
  const double theta_max = first_koz_contact(model, x0, env, dt);
  if (theta_max_out) *theta_max_out = theta_max;

  std::vector<double> cands{0.0, theta_max};

  // Stationary points of the burn cost: tan 2 theta = -kc / ks, period pi/2.
  const double a = 3.0 * w * x0(0) + 2.0 * x0(4);
  const double ks = 0.75 * a * a - 0.75 * x0(3) * x0(3) + w * w * x0(2) * x0(2) -
                    x0(5) * x0(5);
  const double kc = 1.5 * x0(3) * a - 2.0 * w * x0(5) * x0(2);
  if (ks != 0.0 || kc != 0.0) {
    push_periodic(cands, 0.5 * std::atan2(-kc, ks), 0.5 * std::numbers::pi, theta_max);
  }

  // |dx(theta)| = rho: dx = c0 + R cos(theta - phi).
  const double rho = band_half_width(env);
  if (rho > 0.0) {
    const double c0 = 4.0 * x0(0) + 2.0 * x0(4) / w;
    const double p = -3.0 * x0(0) - 2.0 * x0(4) / w;
    const double q = x0(3) / w;
    const double amp = std::hypot(p, q);
    const double phi = std::atan2(q, p);
    const double target = rho * (1.0 + kEdgeMargin);
    if (amp > 0.0) {
      for (double level : {target, -target}) {
        const double cosv = (level - c0) / amp;
        if (std::abs(cosv) > 1.0) continue;
        const double ac = std::acos(cosv);
        push_periodic(cands, phi + ac, kTwoPi, theta_max);
        push_periodic(cands, phi - ac, kTwoPi, theta_max);
      }
    }
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  return cands;
}

CamResult optimal_cam(const OrbitModel& model, const State& x_fail, const Environment& env,
                      double dt) {
  if (env.in_koz(x_fail.head<3>())) throw UnsafeState("optimal_cam: state inside the KOZ");
  double theta_max = 0.0;
  const auto cands = cam_candidates(model, x_fail, env, dt, &theta_max);
  const double rho = band_half_width(env);
  const double w = model.omega();

  double best = std::numeric_limits<double>::infinity();
  CamResult out;
  for (double th : cands) {
    const State x = propagate_coast(model, x_fail, th / w);
    if (!outside_band(x(0), rho)) continue;
    const Impulse burn = circularization_burn(model, x);
    const double c = burn.dv.squaredNorm();
    if (c < best) {
      best = c;
      out.theta_star = th;
      out.Th = th / w;
      out.pre_burn = x;
      out.dv_circ = Impulse{burn.dv, out.Th};
    }
  }
  if (!std::isfinite(best)) throw UnsafeState("optimal_cam: no candidate reaches the invariant set");
  out.post_state = out.pre_burn;
  out.post_state.tail<3>() += out.dv_circ.dv;
  // Remove rounding so the post state satisfies the invariant set equations
  // exactly.
  out.post_state(3) = 0.0;
  out.post_state(4) = -1.5 * w * out.post_state(0);
  out.post_state(5) = 0.0;
  out.theta_max = theta_max;
  return out;
}

std::string_view to_string(CamPolicy p) {
  switch (p) {
    case CamPolicy::TurnBurnTurn: return "turn_burn_turn";
    case CamPolicy::NadirHold: return "nadir_hold";
    case CamPolicy::Passive: return "passive";
  }
  return "unknown";
}

std::string_view to_string(CamFailure f) {
  switch (f) {
    case CamFailure::None: return "none";
    case CamFailure::InsideKoz: return "inside_koz";
    case CamFailure::NoInvariantCandidate: return "no_invariant_candidate";
    case CamFailure::CoastArcBlocked: return "coast_arc_blocked";
    case CamFailure::PostArcBlocked: return "post_arc_blocked";
    case CamFailure::BurnUnallocatable: return "burn_unallocatable";
    case CamFailure::PlumeImpingement: return "plume_impingement";
  }
  return "unknown";
}

SafetyContext::SafetyContext(const OrbitModel& m, Environment e, ThrusterConfig c, int F,
                             double step, CamPolicy p)
    : model(m), env(std::move(e)), config(std::move(c)), fault_tolerance(F), dt(step),
      policy(p),
      modes(enumerate_failure_modes(static_cast<int>(config.size()), F)) {}

std::size_t CamCertificate::feasible_count() const {
  return static_cast<std::size_t>(std::count(mode_ok.begin(), mode_ok.end(), 1));
}

namespace {

bool arc_clear(const OrbitModel& model, const State& x0, double t_end, const Environment& env,
               double dt) {
  return walk_trajectory(model, x0, BurnSchedule{}, t_end, dt,
                         [&](double, const State& x) { return point_clear(x.head<3>(), env); });
}

}  // namespace

CamFailure burn_verdict(const SafetyContext& ctx, const State& pre, const Vec3& dv,
                        const FailureMask& mask) {
  if (dv.isZero(0.0)) return CamFailure::None;
  if (ctx.policy == CamPolicy::NadirHold) {
    const Mat3 R = attitude_policy(pre);
    auto alloc = try_allocate(R * dv, Vec3::Zero(), ctx.config, mask);
    if (!alloc) return CamFailure::BurnUnallocatable;
    if (!plumes_clear(pre.head<3>(), R, ctx.config, *alloc, ctx.env)) {
      return CamFailure::PlumeImpingement;
    }
    return CamFailure::None;
  }
  if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
    return CamFailure::BurnUnallocatable;
  }
  if (cone_sphere_intersects(plume_cone(pre.head<3>(), dv, ctx.config.plume), ctx.env.target())) {
    return CamFailure::PlumeImpingement;
  }
  return CamFailure::None;
}

namespace {

CamCertificate all_failed(const SafetyContext& ctx, CamCertificate cert, CamFailure why) {
  cert.safe = false;
  cert.reason = why;
  cert.mode_ok.assign(ctx.modes.size(), 0);
  cert.first_failed_mode = 0;
  return cert;
}

}  // namespace

CamCertificate certify_with_prefix(const SafetyContext& ctx, const State& x,
                                   const Vec3& prefix_dv) {
  CamCertificate cert;
  cert.prefix_dv = prefix_dv;
  if (ctx.env.in_koz(x.head<3>())) return all_failed(ctx, cert, CamFailure::InsideKoz);
  State start = x;
  start.tail<3>() += prefix_dv;
  const double period = ctx.model.period();

  if (ctx.policy == CamPolicy::Passive) {
    if (!prefix_dv.isZero(0.0)) {
      // A passive abort cannot execute the pending burn.
      return all_failed(ctx, cert, CamFailure::BurnUnallocatable);
    }
    if (!arc_clear(ctx.model, start, period, ctx.env, ctx.dt)) {
      return all_failed(ctx, cert, CamFailure::CoastArcBlocked);
    }
    cert.safe = true;
    cert.mode_ok.assign(ctx.modes.size(), 1);
    return cert;
  }

  CamResult cam;
  try {
    cam = optimal_cam(ctx.model, start, ctx.env, ctx.dt);
  } catch (const UnsafeState&) {
    return all_failed(ctx, cert, CamFailure::NoInvariantCandidate);
  }
  cert.cam = cam;
  if (!arc_clear(ctx.model, start, cam.Th, ctx.env, ctx.dt)) {
    return all_failed(ctx, cert, CamFailure::CoastArcBlocked);
  }
  if (!arc_clear(ctx.model, cam.post_state, period, ctx.env, ctx.dt)) {
    return all_failed(ctx, cert, CamFailure::PostArcBlocked);
  }

  cert.mode_ok.assign(ctx.modes.size(), 0);
  cert.safe = true;
  for (std::size_t m = 0; m < ctx.modes.size(); ++m) {
    CamFailure f = burn_verdict(ctx, x, prefix_dv, ctx.modes[m]);
    if (f == CamFailure::None) f = burn_verdict(ctx, cam.pre_burn, cam.dv_circ.dv, ctx.modes[m]);
    cert.mode_ok[m] = f == CamFailure::None ? 1 : 0;
    if (f != CamFailure::None && cert.safe) {
      cert.safe = false;
      cert.reason = f;
      cert.first_failed_mode = static_cast<std::uint32_t>(m);
    }
  }
  return cert;
}

CamCertificate extend_with_prefix(const SafetyContext& ctx, const CamCertificate& base,
                                  const State& x, const Vec3& prefix_dv) {
  CamCertificate cert = base;
  cert.prefix_dv = prefix_dv;
  if (!base.safe || prefix_dv.isZero(0.0)) return cert;
  if (ctx.policy == CamPolicy::Passive) {
    return all_failed(ctx, cert, CamFailure::BurnUnallocatable);
  }
  for (std::size_t m = 0; m < ctx.modes.size(); ++m) {
    const CamFailure f = burn_verdict(ctx, x, prefix_dv, ctx.modes[m]);
    if (f == CamFailure::None) continue;
    cert.mode_ok[m] = 0;
    if (cert.safe) {
      cert.safe = false;
      cert.reason = f;
      cert.first_failed_mode = static_cast<std::uint32_t>(m);
    }
  }
  return cert;
}

CamCertificate certify_state(const SafetyContext& ctx, const State& x) {
  return certify_with_prefix(ctx, x, Vec3::Zero());
}

}  // namespace cwhfmt
