#include "dpp/state_space.hpp"

#include <cmath>
#include <sstream>

#include "dpp/error.hpp"
#include "linalg.hpp"

namespace dpp {

Complex StateSpace::freq_response(double omega) const {
  const Eigen::Index n = order();
  if (n == 0) return D;
  Eigen::MatrixXcd m = -A.cast<Complex>();
  m.diagonal().array() += Complex(0.0, omega);
  Eigen::VectorXcd x = m.partialPivLu().solve(B.cast<Complex>());
  return (C.cast<Complex>() * x)(0) + D;
}

StateSpace realize(const RationalTF& sys) {
  if (!sys.is_proper()) {
    std::ostringstream os;
    os << "realize: improper system, numerator degree exceeds denominator degree by "
       << sys.relative_degree();
    throw invalid_input(os.str());
  }
  const Polynomial& den = sys.den();
  const int n = den.degree();
  StateSpace ss;
  Polynomial num = sys.num();
  if (!num.is_zero() && num.degree() == n) {
    DivMod qr = divmod(num, den);
    ss.D = qr.quotient[0];
    num = qr.remainder;
  }
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::VectorXd::Zero(n);
  ss.C = Eigen::RowVectorXd::Zero(n);
  if (n == 0) return ss;
  const double lead = den.leading();
  for (int k = 0; k + 1 < n; ++k) ss.A(k, k + 1) = 1.0;
  for (int k = 0; k < n; ++k) {
    ss.A(n - 1, k) = -den[k] / lead;
    ss.C(k) = num[k] / lead;
  }
  ss.B(n - 1) = 1.0;
  return ss;
}

SampledSignal simulate(const StateSpace& ss, InputKind input, double dt, double horizon) {
  if (!(dt > 0.0)) throw invalid_input("simulate: dt must be positive");
  if (!(horizon > dt)) throw invalid_input("simulate: horizon must exceed dt");

  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  SampledSignal out;
  out.dt = dt;
  out.t.resize(steps + 1);
  out.y.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) out.t[k] = static_cast<double>(k) * dt;

  const Eigen::Index n = ss.order();
  const double u = input == InputKind::Step ? 1.0 : 0.0;
  if (input == InputKind::Impulse) out.impulse_weight = ss.D;
  if (n == 0) {
    std::fill(out.y.begin(), out.y.end(), ss.D * u);
    return out;
  }

  // Diagonal similarity keeps companion-form states at comparable scale.
  Eigen::MatrixXd a = ss.A;
  Eigen::VectorXd scale;
  balance(a, &scale);
  const Eigen::VectorXd b = ss.B.cwiseQuotient(scale);
  const Eigen::RowVectorXd c = ss.C.cwiseProduct(scale.transpose());

  const double rho = a.eigenvalues().cwiseAbs().maxCoeff();
  if (rho * dt > kRk4StepLimit) {
    std::ostringstream os;
    os << "simulate: unstable integration, spectral radius " << rho << " * dt " << dt << " exceeds "
       << kRk4StepLimit << "; use dt <= " << kRk4StepLimit / rho;
    throw numeric_failure(os.str());
  }

  Eigen::VectorXd x = input == InputKind::Impulse ? b : Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd bu = b * u;
  auto f = [&](const Eigen::VectorXd& s) -> Eigen::VectorXd { return a * s + bu; };
  out.y[0] = c.dot(x) + ss.D * u;
  for (std::size_t k = 1; k <= steps; ++k) {
    const Eigen::VectorXd k1 = f(x);
    const Eigen::VectorXd k2 = f(x + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = f(x + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = f(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.y[k] = c.dot(x) + ss.D * u;
  }
  return out;
}

}  // namespace dpp
