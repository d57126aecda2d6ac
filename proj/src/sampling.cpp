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

#include "cwhfmt/sampling.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace cwhfmt {

namespace {

constexpr std::array<std::uint64_t, 6> kPrimes{2, 3, 5, 7, 11, 13};

struct Screened {
  bool ok = false;
  CamCertificate cert;
};

Screened screen(const State& x, const SafetyContext& ctx) {
  Screened s;
  if (!point_feasible(x, ctx.env)) return s;
  s.cert = certify_state(ctx, x);
  s.ok = s.cert.safe;
  return s;
}

// Draws from `gen(index)` until `want` candidates are accepted.
template <typename Gen>
void draw(std::size_t want, std::uint64_t& index, const SafetyContext& ctx,
          const SamplingOptions& opt, Gen&& gen, SampleSet& out, const char* what) {
  std::size_t accepted = 0;
  std::uint64_t window_draws = 0;
  std::uint64_t window_accepts = 0;
  const auto min_accepts =
      static_cast<std::uint64_t>(std::ceil(static_cast<double>(opt.window) * opt.min_rate));
  std::vector<State> cand;
  std::vector<Screened> res;
  while (accepted < want) {
    cand.clear();
    for (std::size_t b = 0; b < opt.batch; ++b) cand.push_back(gen(index + 1 + b));
    res.assign(cand.size(), Screened{});
    const auto nb = static_cast<std::int64_t>(cand.size());
    if (opt.exec == Exec::Parallel) {
      configure_workers();
#pragma omp parallel for schedule(dynamic, 8)
      for (std::int64_t b = 0; b < nb; ++b) {
        res[static_cast<std::size_t>(b)] = screen(cand[static_cast<std::size_t>(b)], ctx);
      }
    } else {
      for (std::int64_t b = 0; b < nb; ++b) {
        res[static_cast<std::size_t>(b)] = screen(cand[static_cast<std::size_t>(b)], ctx);
      }
    }
    // Order-preserving merge; candidates past the last needed one are
    // discarded so the result does not depend on the batch size.
    for (std::size_t b = 0; b < cand.size() && accepted < want; ++b) {
      ++index;
      ++window_draws;
      if (res[b].ok) {
        out.states.push_back(cand[b]);
        out.certificates.push_back(std::move(res[b].cert));
        ++accepted;
        ++window_accepts;
      }
      if (window_draws == opt.window) {
        if (window_accepts < min_accepts) {
          throw SamplingExhausted(std::string("sample_free: acceptance stalled while drawing ") +
                                  what + " samples");
        }
        window_draws = 0;
        window_accepts = 0;
      }
    }
  }
}

Vec3 ball_point(double u0, double u1, double u2, double radius) {
  const double r = radius * std::cbrt(u0);
  const double cz = 1.0 - 2.0 * u1;
  const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  const double ph = 2.0 * std::numbers::pi * u2;
  return Vec3(r * sz * std::cos(ph), r * sz * std::sin(ph), r * cz);
}

}  // namespace

std::array<double, 6> halton(std::uint64_t index, int dim) {
  if (index == 0) throw std::invalid_argument("halton: index starts at 1");
  if (dim < 1 || dim > 6) throw std::invalid_argument("halton: dim must be in [1, 6]");
  std::array<double, 6> out{};
  for (int d = 0; d < dim; ++d) {
    const std::uint64_t base = kPrimes[static_cast<std::size_t>(d)];
    double f = 1.0;
    double r = 0.0;
    std::uint64_t i = index;
    while (i > 0) {
      f /= static_cast<double>(base);
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    out[static_cast<std::size_t>(d)] = r;
  }
  return out;
}

State SampleSpace::from_unit(const std::array<double, 6>& u) const {
  State x = State::Zero();
  static constexpr std::array<int, 4> kPlanar{0, 1, 3, 4};
  if (planar) {
    for (std::size_t d = 0; d < 4; ++d) {
      const int c = kPlanar[d];
      x(c) = box.lower(c) + u[d] * (box.upper(c) - box.lower(c));
    }
  } else {
    for (int c = 0; c < 6; ++c) {
      x(c) = box.lower(c) + u[static_cast<std::size_t>(c)] * (box.upper(c) - box.lower(c));
    }
  }
  return x;
}

bool GoalRegion::contains(const State& x) const {
  return (x.head<3>() - center.head<3>()).norm() <= eps_r &&
         (x.tail<3>() - center.tail<3>()).norm() <= eps_v;
}

State GoalRegion::from_unit(const std::array<double, 6>& u, bool planar) const {
  State x = center;
  if (planar) {
    const double rr = eps_r * std::sqrt(u[0]);
    const double pr = 2.0 * std::numbers::pi * u[1];
    const double rv = eps_v * std::sqrt(u[2]);
    const double pv = 2.0 * std::numbers::pi * u[3];
    x(0) += rr * std::cos(pr);
    x(1) += rr * std::sin(pr);
    x(3) += rv * std::cos(pv);
    x(4) += rv * std::sin(pv);
  } else {
    x.head<3>() += ball_point(u[0], u[1], u[2], eps_r);
    x.tail<3>() += ball_point(u[3], u[4], u[5], eps_v);
  }
  return x;
}

SampleSet sample_free(const SampleSpace& space, std::size_t n, const SafetyContext& ctx,
                      const GoalRegion& goal, std::size_t n_goal,
                      const SamplingOptions& options) {
  if (n < 1) throw std::invalid_argument("sample_free: n must be >= 1");
  SampleSet out;
  const int dim = space.dim();
  std::uint64_t index = 0;
  draw(n, index, ctx, options,
       [&](std::uint64_t i) { return space.from_unit(halton(i, dim)); }, out, "space");
  out.n = n;
  out.draws = index;
  std::uint64_t gindex = 0;
  if (n_goal > 0) {
    draw(n_goal, gindex, ctx, options,
         [&](std::uint64_t i) { return goal.from_unit(halton(i, dim), space.planar); }, out,
         "goal");
  }
  out.n_goal = n_goal;
  out.goal_draws = gindex;
  return out;
}

}  // namespace cwhfmt
