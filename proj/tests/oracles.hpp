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

// Reference solvers used only by the tests.  None of them calls into the
// library, so agreement is evidence rather than tautology.

#ifndef CWHFMT_TESTS_ORACLES_HPP
#define CWHFMT_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// xdot = A x for the linearised relative motion about a circular orbit.
inline Mat6 cwh_matrix(double w) {
  Mat6 a = Mat6::Zero();
  a(0, 3) = a(1, 4) = a(2, 5) = 1.0;
  a(3, 0) = 3.0 * w * w;
  a(3, 4) = 2.0 * w;
  a(4, 3) = -2.0 * w;
  a(5, 2) = -w * w;
  return a;
}

/// exp(A t) by scaling and squaring of a truncated Taylor series.
inline Mat6 expm(const Mat6& a, double t) {
  const Mat6 at = a * t;
  const double nrm = at.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (nrm / std::ldexp(1.0, squarings) > 0.125) ++squarings;
  const Mat6 x = at / std::ldexp(1.0, squarings);
  Mat6 term = Mat6::Identity();
  Mat6 sum = Mat6::Identity();
  for (int k = 1; k <= 18; ++k) {
    term = term * x / k;
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Two-impulse transfer cost at a fixed duration from a dense 6x6 solve.
inline double two_impulse_cost(const Mat6& phi, const Vec6& x0, const Vec6& xf) {
  Mat6 m;
  m.leftCols<3>() = phi.rightCols<3>();
  m.rightCols<3>().setZero();
  m.bottomRightCorner<3, 3>().setIdentity();
  const Vec6 dv = m.fullPivLu().solve(xf - phi * x0);
  return dv.head<3>().norm() + dv.tail<3>().norm();
}

/// Adaptive Dormand-Prince 5(4) for a linear autonomous system.
class Rk45 {
 public:
  Rk45(const Mat6& a, double rtol, double atol) : a_(a), rtol_(rtol), atol_(atol) {}

  Vec6 integrate(const Vec6& x0, double t_end) {
    Vec6 x = x0;
    if (t_end == 0.0) return x;
    const double dir = t_end > 0.0 ? 1.0 : -1.0;
    double t = 0.0;
    double h = dir * std::min(std::abs(t_end), 10.0);
    Vec6 k1 = a_ * x;
    while (dir * (t_end - t) > 0.0) {
      if (dir * (t + h - t_end) > 0.0) h = t_end - t;
      const Vec6 k2 = a_ * (x + h * (1.0 / 5) * k1);
      const Vec6 k3 = a_ * (x + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
      const Vec6 k4 = a_ * (x + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
      const Vec6 k5 = a_ * (x + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                     64448.0 / 6561 * k3 - 212.0 / 729 * k4));
      const Vec6 k6 = a_ * (x + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                                     46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                                     5103.0 / 18656 * k5));
      const Vec6 y5 = x + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                               2187.0 / 6784 * k5 + 11.0 / 84 * k6);
      const Vec6 k7 = a_ * y5;
      const Vec6 err = h * ((35.0 / 384 - 5179.0 / 57600) * k1 +
                            (500.0 / 1113 - 7571.0 / 16695) * k3 +
                            (125.0 / 192 - 393.0 / 640) * k4 +
                            (-2187.0 / 6784 + 92097.0 / 339200) * k5 +
                            (11.0 / 84 - 187.0 / 2100) * k6 - 1.0 / 40 * k7);
      double en = 0.0;
      for (int i = 0; i < 6; ++i) {
        const double sc = atol_ + rtol_ * std::max(std::abs(x(i)), std::abs(y5(i)));
        en = std::max(en, std::abs(err(i)) / sc);
      }
      if (en <= 1.0) {
        t += h;
        x = y5;
        k1 = k7;
        ++steps_;
      }
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h *= fac;
    }
    return x;
  }

  long steps() const { return steps_; }

 private:
  Mat6 a_;
  double rtol_;
  double atol_;
  long steps_ = 0;
};

/**
 * min 1^T x  s.t.  A x = b, x >= 0, x_k = 0 for disabled columns, by
 * enumerating every column basis of size rank(A).  Exponential, but exact
 * for the 16-column allocation problem.
 */
inline std::optional<double> lp_vertex_min(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                           const std::vector<bool>& enabled,
                                           Eigen::VectorXd* x_best = nullptr) {
  std::vector<int> cols;
  for (int k = 0; k < A.cols(); ++k) {
    if (enabled[static_cast<std::size_t>(k)]) cols.push_back(k);
  }
  const int n = static_cast<int>(cols.size());
  Eigen::MatrixXd Ae(A.rows(), n);
  for (int i = 0; i < n; ++i) Ae.col(i) = A.col(cols[static_cast<std::size_t>(i)]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu_all(Ae);
  lu_all.setThreshold(1e-10);
  const int r = static_cast<int>(lu_all.rank());
  const double bscale = std::max(1.0, b.norm());
  std::optional<double> best;
  std::vector<int> idx(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (r == 0) {
    if (b.norm() <= 1e-12 * bscale) {
      if (x_best) *x_best = Eigen::VectorXd::Zero(A.cols());
      return 0.0;
    }
    return std::nullopt;
  }
  while (true) {
    Eigen::MatrixXd S(A.rows(), r);
    for (int i = 0; i < r; ++i) S.col(i) = Ae.col(idx[static_cast<std::size_t>(i)]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
    qr.setThreshold(1e-10);
    if (qr.rank() == r) {
      const Eigen::VectorXd xs = qr.solve(b);
      const bool fits = (S * xs - b).norm() <= 1e-10 * bscale;
      const bool nonneg = (xs.array() >= -1e-12 * bscale).all();
      if (fits && nonneg) {
        const double obj = xs.sum();
        if (!best || obj < *best) {
          best = obj;
          if (x_best) {
            x_best->setZero(A.cols());
            for (int i = 0; i < r; ++i) {
              (*x_best)(cols[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]) = xs(i);
            }
          }
        }
      }
    }
    int i = r - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - r + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < r; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

/**
 * min sum_i ||u_i||  s.t.  M u = b  over 3-blocks u_i, by a primal
 * log-barrier method on the epigraph form (u_i, s_i), ||u_i|| <= s_i.
 * Returns sum_i ||u_i|| of the final (feasible) iterate, which overestimates
 * the optimum by at most the final duality gap `gap`.
 */
inline double barrier_block_norm(const Eigen::MatrixXd& M_in, const Eigen::VectorXd& b_in,
                                 double gap = 1e-11) {
  // Row equilibration does not change the feasible set.
  Eigen::MatrixXd M = M_in;
  Eigen::VectorXd b = b_in;
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    const double s = M.row(r).norm();
    if (s > 0.0) {
      M.row(r) /= s;
      b(r) /= s;
    }
  }
  const Eigen::Index nu = M.cols();
  const Eigen::Index m = nu / 3;

  // u = u0 + N w keeps M u = b exactly; Newton runs on y = (w, s).
  const Eigen::VectorXd u0 = M.transpose() * (M * M.transpose()).ldlt().solve(b);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const Eigen::Index rank = svd.rank();
  const Eigen::MatrixXd N = svd.matrixV().rightCols(nu - rank);
  const Eigen::Index nw = N.cols();
  const Eigen::Index ny = nw + m;

  Eigen::VectorXd y = Eigen::VectorXd::Zero(ny);
  for (Eigen::Index i = 0; i < m; ++i) y(nw + i) = u0.segment<3>(3 * i).norm() + 1.0;
  auto u_of = [&](const Eigen::VectorXd& yy) -> Eigen::VectorXd { return u0 + N * yy.head(nw); };

  auto slack = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& yy, Eigen::Index i) {
    const double s = yy(nw + i);
    return s * s - u.segment<3>(3 * i).squaredNorm();
  };
  auto feasible = [&](const Eigen::VectorXd& yy) {
    const Eigen::VectorXd u = u_of(yy);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!(yy(nw + i) > 0.0) || !(slack(u, yy, i) > 0.0)) return false;
    }
    return true;
  };
  auto merit = [&](const Eigen::VectorXd& yy, double t) {
    const Eigen::VectorXd u = u_of(yy);
    double f = t * yy.tail(m).sum();
    for (Eigen::Index i = 0; i < m; ++i) f -= std::log(slack(u, yy, i));
    return f;
  };

  double t = 1.0;
  while (true) {
    for (int it = 0; it < 200; ++it) {
      const Eigen::VectorXd u = u_of(y);
      // Gradient and Hessian in (u, s), then mapped through u = u0 + N w.
      Eigen::VectorXd gu = Eigen::VectorXd::Zero(nu);
      Eigen::VectorXd gs = Eigen::VectorXd::Constant(m, t);
      Eigen::MatrixXd Huu = Eigen::MatrixXd::Zero(nu, nu);
      Eigen::MatrixXd Hus = Eigen::MatrixXd::Zero(nu, m);
      Eigen::VectorXd Hss = Eigen::VectorXd::Zero(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Vector3d ui = u.segment<3>(3 * i);
        const double s = y(nw + i);
        const double q = slack(u, y, i);
        gu.segment<3>(3 * i) = 2.0 * ui / q;
        gs(i) += -2.0 * s / q;
        Huu.block<3, 3>(3 * i, 3 * i) =
            2.0 / q * Eigen::Matrix3d::Identity() + 4.0 / (q * q) * ui * ui.transpose();
        Hss(i) = -2.0 / q + 4.0 * s * s / (q * q);
        Hus.block<3, 1>(3 * i, i) = -4.0 * s / (q * q) * ui;
      }
      Eigen::VectorXd g(ny);
      g.head(nw) = N.transpose() * gu;
      g.tail(m) = gs;
      Eigen::MatrixXd H(ny, ny);
      H.topLeftCorner(nw, nw) = N.transpose() * Huu * N;
      H.topRightCorner(nw, m) = N.transpose() * Hus;
      H.bottomLeftCorner(m, nw) = H.topRightCorner(nw, m).transpose();
      H.bottomRightCorner(m, m) = Hss.asDiagonal();
      const Eigen::VectorXd dy = H.ldlt().solve(-g);
      const double decrement = -g.dot(dy);
      if (!(decrement / 2.0 > 1e-14)) break;
      double step = 1.0;
      const double f0 = merit(y, t);
      while (step > 1e-20) {
        const Eigen::VectorXd yn = y + step * dy;
        if (feasible(yn) && merit(yn, t) <= f0 - 0.25 * step * decrement) break;
        step *= 0.5;
      }
      if (step <= 1e-20) break;
      y += step * dy;
    }
    if (static_cast<double>(2 * m) / t < gap) break;
    t *= 8.0;
  }
  const Eigen::VectorXd z = u_of(y);
  double obj = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) obj += z.segment<3>(3 * i).norm();
  return obj;
}

/// Exhaustive 1-D search: minimum of f over `n` evenly spaced points of
/// [lo, hi] among points where `admissible` holds, and the largest change of
/// f between neighbouring admissible points.
struct GridMin {
  double value = std::numeric_limits<double>::infinity();
  double arg = 0.0;
  double resolution = 0.0;
};

inline GridMin grid_minimum(double lo, double hi, int n, const std::function<double(double)>& f,
                            const std::function<bool(double)>& admissible) {
  GridMin out;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < n; ++k) {
    const double x = lo + (hi - lo) * k / (n - 1);
    if (!admissible(x)) {
      prev = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double v = f(x);
    if (!std::isnan(prev)) out.resolution = std::max(out.resolution, std::abs(v - prev));
    prev = v;
    if (v < out.value) {
      out.value = v;
      out.arg = x;
    }
  }
  return out;
}

}  // namespace oracle

#endif  // CWHFMT_TESTS_ORACLES_HPP
