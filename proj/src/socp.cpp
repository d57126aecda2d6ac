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

#include "cwhfmt/socp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cwhfmt {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

double block_norm_sum(const VectorXd& u) {
  double s = 0.0;
  for (Index i = 0; i < u.size(); i += 3) s += u.segment<3>(i).norm();
  return s;
}

// Orthogonal projector onto {u : M u = b} expressed through M^+.
struct AffineProjector {
  MatrixXd pinv;
  MatrixXd M;
  VectorXd b;

  VectorXd operator()(const VectorXd& v) const { return v - pinv * (M * v - b); }
};

// Newton refinement of  u_i/|u_i| + M_i^T nu = 0  (i active),  M u = b.
bool polish(const MatrixXd& M, const VectorXd& b, VectorXd& u, double zero_tol,
            double baseline) {
  const Index nb = u.size() / 3;
  std::vector<Index> act;
  for (Index i = 0; i < nb; ++i) {
    if (u.segment<3>(3 * i).norm() > zero_tol) act.push_back(i);
  }
  if (act.empty()) return false;
  const Index na = static_cast<Index>(act.size());
  const Index m = M.rows();
  MatrixXd Ms(m, 3 * na);
  VectorXd us(3 * na);
  for (Index k = 0; k < na; ++k) {
    Ms.middleCols<3>(3 * k) = M.middleCols<3>(3 * act[static_cast<std::size_t>(k)]);
    us.segment<3>(3 * k) = u.segment<3>(3 * act[static_cast<std::size_t>(k)]);
  }
  VectorXd g(3 * na);
  for (Index k = 0; k < na; ++k) g.segment<3>(3 * k) = us.segment<3>(3 * k).normalized();
  VectorXd nu = Ms.transpose().completeOrthogonalDecomposition().solve(-g);

  auto residual = [&](const VectorXd& uu, const VectorXd& vv) {
    VectorXd r(3 * na + m);
    for (Index k = 0; k < na; ++k) {
      r.segment<3>(3 * k) = uu.segment<3>(3 * k).normalized() + Ms.middleCols<3>(3 * k).transpose() * vv;
    }
    r.tail(m) = Ms * uu - b;
    return r;
  };

  VectorXd r = residual(us, nu);
  for (int it = 0; it < 30 && r.norm() > 1e-14; ++it) {
    MatrixXd K = MatrixXd::Zero(3 * na + m, 3 * na + m);
    for (Index k = 0; k < na; ++k) {
      const Eigen::Vector3d ui = us.segment<3>(3 * k);
      const double n = ui.norm();
      const Eigen::Vector3d e = ui / n;
      K.block<3, 3>(3 * k, 3 * k) = (Eigen::Matrix3d::Identity() - e * e.transpose()) / n;
    }
    K.topRightCorner(3 * na, m) = Ms.transpose();
    K.bottomLeftCorner(m, 3 * na) = Ms;
    const VectorXd step = K.completeOrthogonalDecomposition().solve(-r);
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      const VectorXd u2 = us + t * step.head(3 * na);
      bool ok = true;
      for (Index k = 0; k < na; ++k) ok = ok && u2.segment<3>(3 * k).norm() > 0.0;
      if (!ok) continue;
      const VectorXd v2 = nu + t * step.tail(m);
      const VectorXd r2 = residual(u2, v2);
      if (r2.norm() < r.norm()) {
        us = u2;
        nu = v2;
        r = r2;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  // Dual feasibility on the inactive blocks.
  for (Index i = 0; i < nb; ++i) {
    if (std::find(act.begin(), act.end(), i) != act.end()) continue;
    if ((M.middleCols<3>(3 * i).transpose() * nu).norm() > 1.0 + 1e-7) return false;
  }
  VectorXd cand = VectorXd::Zero(u.size());
  for (Index k = 0; k < na; ++k) cand.segment<3>(3 * act[static_cast<std::size_t>(k)]) = us.segment<3>(3 * k);
  if ((M * cand - b).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    return false;
  }
  if (block_norm_sum(cand) > baseline + 1e-12) return false;
  u = cand;
  return true;
}

}  // namespace

SocpResult solve_block_norm_socp(const MatrixXd& M_in, const VectorXd& b_in, double cap,
                                 const SocpOptions& options) {
  SocpResult res;
  const Index n = M_in.cols();
  // Row equilibration: position rows carry a duration scale.
  VectorXd rs(M_in.rows());
  for (Index i = 0; i < M_in.rows(); ++i) {
    const double nrm = M_in.row(i).norm();
    rs(i) = nrm > 0.0 ? 1.0 / nrm : 1.0;
  }
  const MatrixXd M = rs.asDiagonal() * M_in;
  const VectorXd b = rs.asDiagonal() * b_in;

  AffineProjector proj{M.completeOrthogonalDecomposition().pseudoInverse(), M, b};
  const VectorXd u_ls = proj.pinv * b;
  if ((M * u_ls - b).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    res.equality_consistent = false;
    res.u = u_ls;
    return res;
  }

  const double scale = std::max(u_ls.cwiseAbs().maxCoeff(), 1e-12);
  double rho = 1.0 / scale;
  VectorXd w = u_ls;
  VectorXd lam = VectorXd::Zero(n);
  VectorXd u = u_ls;
  const double eps = options.tol * 1e-4;
  int it = 0;
  for (; it < options.max_iter; ++it) {
    u = proj(w - lam);
    const VectorXd w_prev = w;
    const VectorXd v = u + lam;
    for (Index i = 0; i < n; i += 3) {
      const Eigen::Vector3d vi = v.segment<3>(i);
      const double nv = vi.norm();
      double shrink = nv > 1.0 / rho ? (nv - 1.0 / rho) : 0.0;
      shrink = std::min(shrink, cap);
      w.segment<3>(i) = nv > 0.0 ? Eigen::Vector3d((shrink / nv) * vi) : Eigen::Vector3d::Zero();
    }
    lam += u - w;
    const double r_pri = (u - w).norm();
    const double r_dual = rho * (w - w_prev).norm();
    if (r_pri <= eps * std::max(1.0, scale) && r_dual <= eps * std::max(1.0, rho * scale)) {
      ++it;
      break;
    }
    // Residual balancing; lam is the scaled dual so it rescales with rho.
    if (it % 50 == 49) {
      if (r_pri > 10.0 * r_dual) {
        rho *= 2.0;
        lam *= 0.5;
      } else if (r_dual > 10.0 * r_pri) {
        rho *= 0.5;
        lam *= 2.0;
      }
    }
  }
  res.iterations = it;
  res.converged = it < options.max_iter;

  // Exact feasibility first, then try to sharpen on the support of w.
  u = proj(w);
  bool cap_active = false;
  for (Index i = 0; i < n; i += 3) cap_active = cap_active || w.segment<3>(i).norm() >= cap * (1 - 1e-9);
  if (!cap_active) {
    VectorXd up = w;
    if (polish(M, b, up, 1e-7 * scale, block_norm_sum(u))) {
      u = up;
      res.converged = true;
    }
  }
  for (Index i = 0; i < n; i += 3) {
    if (u.segment<3>(i).norm() > cap * (1.0 + 1e-9)) res.converged = false;
  }
  res.u = u;
  res.objective = block_norm_sum(u);
  res.primal_residual = (M_in * u - b_in).cwiseAbs().maxCoeff();
  return res;
}

}  // namespace cwhfmt
