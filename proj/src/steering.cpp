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

#include "cwhfmt/steering.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace cwhfmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCondLimit = 1e12;
const double kGolden = 0.5 * (std::sqrt(5.0) - 1.0);

// Inverse of the position/velocity block; the in-plane part is 2x2 and the
// out-of-plane part is scalar.
bool invert_rv(const Mat3& m, Mat3& inv) {
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > 1e-14 * scale * scale) ||
      !(std::abs(m(2, 2)) > 1e-14 * scale)) {
    return false;
  }
  inv.setZero();
  inv(0, 0) = m(1, 1) / det;
  inv(0, 1) = -m(0, 1) / det;
  inv(1, 0) = -m(1, 0) / det;
  inv(1, 1) = m(0, 0) / det;
  inv(2, 2) = 1.0 / m(2, 2);
  return true;
}

bool positions_equal(const State& a, const State& b) {
  return (a.head<3>() - b.head<3>()).cwiseAbs().maxCoeff() <=
         1e-12 * std::max(1.0, a.head<3>().cwiseAbs().maxCoeff());
}

struct Candidate {
  double T = 0.0;
  Vec3 dv1 = Vec3::Zero();
  Vec3 dv2 = Vec3::Zero();
  double cost = kInf;
  double stacked_norm = kInf;
};

Candidate evaluate(const OrbitModel& model, const State& x0, const State& xf,
                   double T, double dv_max) {
  Candidate c;
  c.T = T;
  if (!two_impulse(model, T, x0, xf, c.dv1, c.dv2)) return c;
  const double n1 = c.dv1.norm();
  const double n2 = c.dv2.norm();
  c.stacked_norm = std::sqrt(n1 * n1 + n2 * n2);
  if (n1 > dv_max || n2 > dv_max) return c;
  c.cost = n1 + n2;
  return c;
}

// Golden-section search for the minimum of cost(T) on [a, b].
Candidate golden(const OrbitModel& model, const State& x0, const State& xf,
                 double a, double b, double tol, double dv_max) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  Candidate fc = evaluate(model, x0, xf, c, dv_max);
  Candidate fd = evaluate(model, x0, xf, d, dv_max);
  while (b - a > tol) {
    if (fc.cost < fd.cost) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = evaluate(model, x0, xf, c, dv_max);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = evaluate(model, x0, xf, d, dv_max);
    }
  }
  return fc.cost < fd.cost ? fc : fd;
}

SteeringSolution to_solution(const Candidate& c) {
  SteeringSolution s;
  s.T = c.T;
  s.dv1 = Impulse{c.dv1, 0.0};
  s.dv2 = Impulse{c.dv2, c.T};
  s.cost = c.dv1.norm() + c.dv2.norm();
  return s;
}

Candidate zero_duration(const State& x0, const State& xf, double dv_max) {
  Candidate c;
  c.T = 0.0;
  c.dv2 = xf.tail<3>() - x0.tail<3>();
  const double n = c.dv2.norm();
  c.stacked_norm = n;
  if (n <= dv_max) c.cost = n;
  return c;
}

// Shared search over precomputed grid costs.  `grid_eval(k)` returns the
// candidate at grid point k.
template <typename GridEval>
std::optional<SteeringSolution> search(const OrbitModel& model,
                                       const SteeringLimits& lim,
                                       const std::vector<double>& grid_t,
                                       const State& x0, const State& xf,
                                       GridEval&& grid_eval, double prune_norm) {
  const int n = static_cast<int>(grid_t.size());
  std::vector<Candidate> cands(static_cast<std::size_t>(n));
  double min_norm = kInf;
  for (int k = 0; k < n; ++k) {
    cands[static_cast<std::size_t>(k)] = grid_eval(k);
    min_norm = std::min(min_norm, cands[static_cast<std::size_t>(k)].stacked_norm);
  }

  Candidate best;
  const bool same_pos = positions_equal(x0, xf);
  if (same_pos) best = zero_duration(x0, xf, lim.dv_max);
  if (min_norm >= prune_norm && !(best.cost < kInf)) return std::nullopt;

  for (int k = 0; k < n; ++k) {
    if (cands[static_cast<std::size_t>(k)].cost < best.cost) {
      best = cands[static_cast<std::size_t>(k)];
    }
  }
  for (int k = 0; k < n; ++k) {
    const auto& ck = cands[static_cast<std::size_t>(k)];
    if (!(ck.cost < kInf)) continue;
    const double left = k > 0 ? cands[static_cast<std::size_t>(k - 1)].cost : kInf;
    const double right = k + 1 < n ? cands[static_cast<std::size_t>(k + 1)].cost : kInf;
    if (ck.cost > left || ck.cost > right) continue;
    if (ck.stacked_norm >= prune_norm) continue;
    const double a = k > 0 ? grid_t[static_cast<std::size_t>(k - 1)]
                           : grid_t[0] * 1e-3;
    const double b = k + 1 < n ? grid_t[static_cast<std::size_t>(k + 1)]
                               : grid_t[static_cast<std::size_t>(k)];
    Candidate r = golden(model, x0, xf, a, b, lim.refine_tol, lim.dv_max);
    if (r.cost < best.cost) best = r;
  }
  if (!(best.cost < kInf)) return std::nullopt;
  return to_solution(best);
}

std::vector<double> make_grid(const SteeringLimits& lim) {
  std::vector<double> g(static_cast<std::size_t>(lim.t_grid));
  for (int k = 0; k < lim.t_grid; ++k) {
    g[static_cast<std::size_t>(k)] =
        lim.t_max * static_cast<double>(k + 1) / static_cast<double>(lim.t_grid);
  }
  return g;
}

}  // namespace

SteeringLimits SteeringLimits::from_period_fraction(const OrbitModel& model,
                                                    double frac) {
  SteeringLimits l;
  l.t_max = frac * model.period();
  l.refine_tol = l.t_max * 1e-4;
  return l;
}

void SteeringLimits::validate(const OrbitModel& model) const {
  if (!(t_max > 0.0) || !(t_max < model.period())) {
    throw std::invalid_argument("steering: t_max must lie in (0, period)");
  }
  if (t_grid < 16) throw std::invalid_argument("steering: t_grid must be >= 16");
  if (!(refine_tol > 0.0)) {
    throw std::invalid_argument("steering: refine_tol must be positive");
  }
  if (!(dv_max > 0.0)) throw std::invalid_argument("steering: dv_max must be positive");
}

Vec6 SteeringSolution::stacked() const {
  Vec6 v;
  v << dv1.dv, dv2.dv;
  return v;
}

BurnSchedule SteeringSolution::schedule() const {
  BurnSchedule s;
  s.append(dv1);
  s.append(dv2);
  return s;
}

bool two_impulse(const OrbitModel& model, double T, const State& x0,
                 const State& xf, Vec3& dv1, Vec3& dv2) {
  Mat3 inv;
  if (!invert_rv(stm_rv(model, T), inv)) return false;
  const State delta = xf - propagate_coast(model, x0, T);
  dv1 = inv * delta.head<3>();
  dv2 = delta.tail<3>() - stm_vv(model, T) * dv1;
  return true;
}

SteeringSolution steer_fixed_T(const OrbitModel& model, const State& x0,
                               const State& xf, double T) {
  const Mat6 phiv = impulse_matrix(model, T);
  Eigen::JacobiSVD<Mat6> svd(phiv);
  const auto& sv = svd.singularValues();
  const double cond = sv(5) > 0.0 ? sv(0) / sv(5) : kInf;
  if (!(cond <= kCondLimit)) {
    throw SingularDuration("steer_fixed_T: impulse matrix is singular at this duration");
  }
  Candidate c;
  c.T = T;
  if (!two_impulse(model, T, x0, xf, c.dv1, c.dv2)) {
    // Fall back to the full 6x6 solve; only reachable for extreme scalings.
    const Vec6 dv = svd.solve(xf - propagate_coast(model, x0, T));
    c.dv1 = dv.head<3>();
    c.dv2 = dv.tail<3>();
  }
  return to_solution(c);
}

SteeringSolution solve_2pbvp(const OrbitModel& model, const State& x0,
                             const State& xf, const SteeringLimits& limits) {
  limits.validate(model);
  const auto grid_t = make_grid(limits);
  auto result = search(
      model, limits, grid_t, x0, xf,
      [&](int k) {
        return evaluate(model, x0, xf, grid_t[static_cast<std::size_t>(k)],
                        limits.dv_max);
      },
      kInf);
  if (!result) {
    throw NoFeasibleSolution("solve_2pbvp: every candidate exceeds the per-burn cap");
  }
  return *result;
}

double steering_cost(const OrbitModel& model, const State& x0, const State& xf,
                     const SteeringLimits& limits) {
  try {
    return solve_2pbvp(model, x0, xf, limits).cost;
  } catch (const NoFeasibleSolution&) {
    return kInf;
  }
}

SteeringKernel::SteeringKernel(const OrbitModel& model, const SteeringLimits& limits)
    : model_(model), limits_(limits), grid_t_(make_grid(limits)) {
  limits_.validate(model_);
  grid_.resize(grid_t_.size());
  for (std::size_t k = 0; k < grid_t_.size(); ++k) {
    auto& g = grid_[k];
    g.phi = stm(model_, grid_t_[k]);
    g.vv = stm_vv(model_, grid_t_[k]);
    g.ok = invert_rv(stm_rv(model_, grid_t_[k]), g.rv_inv);
  }
}

std::optional<SteeringSolution> SteeringKernel::solve(const State& x0,
                                                      const State& xf) const {
  return solve_within(x0, xf, 1.0, kInf);
}

std::optional<SteeringSolution> SteeringKernel::solve_within(
    const State& x0, const State& xf, double j_bar, double prune_factor) const {
  const double prune_norm = prune_factor * j_bar;
  return search(
      model_, limits_, grid_t_, x0, xf,
      [&](int k) {
        const auto& g = grid_[static_cast<std::size_t>(k)];
        Candidate c;
        c.T = grid_t_[static_cast<std::size_t>(k)];
        if (!g.ok) return c;
        const State delta = xf - g.phi * x0;
        c.dv1 = g.rv_inv * delta.head<3>();
        c.dv2 = delta.tail<3>() - g.vv * c.dv1;
        const double n1 = c.dv1.norm();
        const double n2 = c.dv2.norm();
        c.stacked_norm = std::sqrt(n1 * n1 + n2 * n2);
        if (n1 <= limits_.dv_max && n2 <= limits_.dv_max) c.cost = n1 + n2;
        return c;
      },
      prune_norm);
}

}  // namespace cwhfmt
