#include "linalg.hpp"

#include <cmath>

#include "dpp/error.hpp"

namespace dpp {

void balance(Eigen::MatrixXd& a, Eigen::VectorXd* scale) {
  const Eigen::Index n = a.rows();
  if (scale) *scale = Eigen::VectorXd::Ones(n);
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = a.col(i).lpNorm<1>() - std::abs(a(i, i));
      double r = a.row(i).lpNorm<1>() - std::abs(a(i, i));
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
        if (scale) (*scale)(i) *= f;
      }
    }
  }
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n * n, n * n);
  // vec(A X + X A^T) = (I (x) A + A (x) I) vec(X), column-major vec.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      big.block(i * n, j * n, n, n) += id(i, j) * a;
      big.block(i * n, j * n, n, n) += a(i, j) * id;
    }
  Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(q.data(), n * n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(big);
  Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) throw numeric_failure("solve_lyapunov: singular Sylvester operator");
  Eigen::MatrixXd out = Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (out + out.transpose());
}

}  // namespace dpp
