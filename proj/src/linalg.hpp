#pragma once

#include <Eigen/Dense>

namespace dpp {

/// Parlett-Reinsch diagonal balancing, radix 2, in place. On return
/// a_out = D^-1 a_in D; when `scale` is given it receives diag(D).
void balance(Eigen::MatrixXd& a, Eigen::VectorXd* scale);

/// Solves A X + X A^T + Q = 0 by the Kronecker (vectorized) formulation.
/// Intended for the small orders used here (n <= ~20).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

}  // namespace dpp
