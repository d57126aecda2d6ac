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

#ifndef CWHFMT_LP_HPP
#define CWHFMT_LP_HPP

#include <Eigen/Dense>

namespace cwhfmt {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
};

/**
 * @brief Dense two-phase simplex with Bland's rule.
 *
 * Solves  min c^T x  s.t.  A x = b,  lo <= x <= hi.  Entries of `hi` may be
 * +inf; entries of `lo` must be finite.  `tol` is the feasibility and
 * optimality tolerance.
 */
LpResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                  const Eigen::VectorXd& b, const Eigen::VectorXd& lo,
                  const Eigen::VectorXd& hi, double tol = 1e-9);

}  // namespace cwhfmt

#endif  // CWHFMT_LP_HPP
