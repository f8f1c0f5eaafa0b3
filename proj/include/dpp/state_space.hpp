#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dpp/rational.hpp"

namespace dpp {

/// Single-input single-output continuous-time realization
///   x' = A x + B u,  y = C x + D u.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;

  Eigen::Index order() const noexcept { return A.rows(); }
  /// C (jwI - A)^-1 B + D
  Complex freq_response(double omega) const;
};

/// Controllable canonical form. A biproper input is split by long division
/// into D plus a strictly proper remainder. Throws invalid_input for an
/// improper system, naming the degree excess.
StateSpace realize(const RationalTF& sys);

enum class InputKind { Step, Impulse };

struct SampledSignal {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> y;
  /// Impulse input only: weight of the delta at t = 0 carried by D. Never
  /// added into y.
  double impulse_weight = 0.0;
};

/// RK4 stability bound used by simulate(): spectral_radius(A) * dt must not
/// exceed this value.
inline constexpr double kRk4StepLimit = 2.5;

/**
 * Fixed-step classical RK4 integration over [0, horizon].
 *
 * A step input is a unit step from t = 0 (y includes D). An impulse is
 * realized as x(0) = B with zero input; D goes to impulse_weight.
 * Samples are taken at t = k*dt for k = 0..round(horizon/dt).
 */
SampledSignal simulate(const StateSpace& ss, InputKind input, double dt, double horizon);

}  // namespace dpp
