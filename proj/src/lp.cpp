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

#include "cwhfmt/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cwhfmt {

namespace {

// Tableau layout: rows 0..m-1 are constraints, row m is the objective
// (reduced costs), last column is the right-hand side.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<int> basis;
  int m = 0;
  int n = 0;  // structural + slack + artificial columns

  double& rhs(int i) { return t(i, n); }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i <= m; ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Bland's rule over columns [0, n_allowed).  Returns false if unbounded.
  bool run(int n_allowed, double tol, int& iters) {
    const int max_iter = 50 * (m + n) + 1000;
    while (iters < max_iter) {
      int enter = -1;
      for (int j = 0; j < n_allowed; ++j) {
        if (t(m, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (t(i, enter) > tol) {
          const double ratio = rhs(i) / t(i, enter);
          if (leave < 0 || ratio < best - 1e-15 ||
              (std::abs(ratio - best) <= 1e-15 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++iters;
    }
    throw std::runtime_error("solve_lp: iteration limit reached");
  }
};

}  // namespace

LpResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                  const Eigen::VectorXd& b, const Eigen::VectorXd& lo,
                  const Eigen::VectorXd& hi, double tol) {
  const int nv = static_cast<int>(c.size());
  const int me = static_cast<int>(A.rows());
  std::vector<int> ub_vars;
  for (int j = 0; j < nv; ++j) {
    if (!std::isfinite(lo(j))) throw std::invalid_argument("solve_lp: lower bounds must be finite");
    if (hi(j) < lo(j)) return LpResult{};
    if (std::isfinite(hi(j))) ub_vars.push_back(j);
  }
  const int nu = static_cast<int>(ub_vars.size());
  const int m = me + nu;
  // Columns: structural (shifted by lo), upper-bound slacks, artificials.
  const int n_struct = nv + nu;
  const int n = n_struct + m;

  Tableau tb;
  tb.m = m;
  tb.n = n;
  tb.t = Eigen::MatrixXd::Zero(m + 1, n + 1);
  tb.basis.assign(static_cast<std::size_t>(m), 0);

  const Eigen::VectorXd b_shift = b - A * lo;
  for (int i = 0; i < me; ++i) {
    const double sgn = b_shift(i) < 0.0 ? -1.0 : 1.0;
    tb.t.block(i, 0, 1, nv) = sgn * A.row(i);
    tb.t(i, n) = sgn * b_shift(i);
  }
  for (int k = 0; k < nu; ++k) {
    const int j = ub_vars[static_cast<std::size_t>(k)];
    tb.t(me + k, j) = 1.0;
    tb.t(me + k, nv + k) = 1.0;
    tb.t(me + k, n) = hi(j) - lo(j);
  }
  for (int i = 0; i < m; ++i) {
    tb.t(i, n_struct + i) = 1.0;
    tb.basis[static_cast<std::size_t>(i)] = n_struct + i;
  }

  // Phase 1: minimise the sum of artificials.
  for (int i = 0; i < m; ++i) tb.t.row(m) -= tb.t.row(i);
  for (int i = 0; i < m; ++i) tb.t(m, n_struct + i) = 0.0;
  LpResult res;
  tb.run(n, tol, res.iterations);
  const double scale = std::max(1.0, b_shift.cwiseAbs().maxCoeff());
  if (-tb.t(m, n) > tol * scale) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // Drive remaining artificials out of the basis; rows where that is
  // impossible are redundant and are zeroed.
  for (int i = 0; i < m; ++i) {
    if (tb.basis[static_cast<std::size_t>(i)] < n_struct) continue;
    int col = -1;
    for (int j = 0; j < n_struct; ++j) {
      if (std::abs(tb.t(i, j)) > tol) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tb.pivot(i, col);
    } else {
      tb.t.row(i).setZero();
    }
  }

  // Phase 2 objective in reduced form.
  tb.t.row(m).setZero();
  for (int j = 0; j < nv; ++j) tb.t(m, j) = c(j);
  tb.t(m, n) = -c.dot(lo);
  for (int i = 0; i < m; ++i) {
    const int bj = tb.basis[static_cast<std::size_t>(i)];
    if (bj < n_struct && tb.t(m, bj) != 0.0) tb.t.row(m) -= tb.t(m, bj) * tb.t.row(i);
  }
  if (!tb.run(n_struct, tol, res.iterations)) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  res.x = lo;
  for (int i = 0; i < m; ++i) {
    const int bj = tb.basis[static_cast<std::size_t>(i)];
    if (bj < nv) res.x(bj) += std::max(0.0, tb.rhs(i));
  }
  res.objective = c.dot(res.x);
  res.status = LpStatus::Optimal;
  return res;
}

}  // namespace cwhfmt
