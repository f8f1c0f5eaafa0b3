#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dpp/placement.hpp"

namespace dpp {

/// Polynomial terms in x = L/T and y = zeta_ol, labelled pXY by power.
enum class BasisTerm { One, X, Y, X2, XY, Y2 };
inline constexpr std::array<BasisTerm, 6> kAllTerms{BasisTerm::One, BasisTerm::X,  BasisTerm::Y,
                                                     BasisTerm::X2,  BasisTerm::XY, BasisTerm::Y2};
std::string_view to_string(BasisTerm t);  // "p00", "p10", ...
BasisTerm parse_basis_term(std::string_view label);
double evaluate_term(BasisTerm t, double x, double y);

/// Kp: full quadratic (6 terms). Ki, Kd: quadratic in x, linear in y, with xy.
std::vector<BasisTerm> default_basis(int gain_index);

enum class Regressand {
  GainTimesK,  // fit K * gain; predictions divide by K
  Gain,        // fit the gain itself; K plays no part
};
std::string_view to_string(Regressand r);
Regressand parse_regressand(std::string_view text);

struct RuleSample {
  double l_over_t = 0.0;
  double zeta_ol = 0.0;
  double K = 1.0;
  PidGains gains;
};

struct GainFit {
  std::vector<BasisTerm> basis;
  Eigen::VectorXd coef;
  Eigen::VectorXd half_width;  // 95% confidence half-widths (NaN with zero dof)
  double rmse = 0.0;           // sqrt(SSE / (n - p))
  double r2 = 0.0;
  double adj_r2 = 0.0;
  std::size_t n = 0;

  double predict(double x, double y) const;
};

/// Fits for Kp, Ki, Kd in that order.
struct TuningRuleFit {
  Regressand regressand = Regressand::GainTimesK;
  std::array<GainFit, 3> gains;
};

/// Ordinary least squares of one gain (0 = Kp, 1 = Ki, 2 = Kd) on a basis.
/// Needs n > p; a rank-deficient design throws invalid_input naming the
/// dependent columns.
GainFit fit_gain(const std::vector<RuleSample>& samples, int gain_index, const std::vector<BasisTerm>& basis,
                 Regressand regressand);

/// Highest adjusted R^2 over every basis that contains p00 and leaves at
/// least one residual degree of freedom. Ties go to the smaller basis.
GainFit search_basis(const std::vector<RuleSample>& samples, int gain_index, Regressand regressand);

TuningRuleFit fit_tuning_rule(const std::vector<RuleSample>& samples, Regressand regressand = Regressand::GainTimesK,
                              bool basis_search = false);

/// Throws invalid_input for K == 0 under the GainTimesK regressand.
PidGains predict_gains(const TuningRuleFit& fit, double l_over_t, double zeta_ol, double K);

std::string fit_to_json(const TuningRuleFit& fit);
TuningRuleFit fit_from_json(std::string_view text);

}  // namespace dpp
