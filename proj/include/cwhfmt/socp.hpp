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

#ifndef CWHFMT_SOCP_HPP
#define CWHFMT_SOCP_HPP

#include <Eigen/Dense>

#include <limits>

namespace cwhfmt {

struct SocpOptions {
  double tol = 1e-6;
  int max_iter = 50000;
};

struct SocpResult {
  bool converged = false;
  bool equality_consistent = true;
  Eigen::VectorXd u;
  double objective = 0.0;
  int iterations = 0;
  /// ||M u - b||_inf of the returned point.
  double primal_residual = 0.0;
};

/**
 * @brief min sum_i ||u_i||  s.t.  M u = b,  ||u_i|| <= cap, with u split
 * into consecutive 3-blocks.
 *
 * ADMM on the split u = w (affine projection, then block shrinkage and
 * clipping), followed by a final exact projection onto M u = b and a
 * Newton refinement of the stationarity conditions on the active blocks.
 */
SocpResult solve_block_norm_socp(const Eigen::MatrixXd& M, const Eigen::VectorXd& b,
                                 double cap = std::numeric_limits<double>::infinity(),
                                 const SocpOptions& options = {});

}  // namespace cwhfmt

#endif  // CWHFMT_SOCP_HPP
