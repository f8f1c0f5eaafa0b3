#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "dpp/placement.hpp"
#include "dpp/plant.hpp"
#include "dpp/rational.hpp"
#include "dpp/state_space.hpp"

namespace dpp {

/**
 * The four closed-loop maps of the unity-feedback PID loop around a plant
 * whose delay is replaced by a Pade approximant. All four share the
 * denominator s Dg + Ng Nc; nothing is cancelled.
 *
 *   Se = 1/(1+CG)   T = CG/(1+CG)   Sd = G/(1+CG)   Su = C/(1+CG)
 *
 * Su is improper by one (ideal derivative). The exact_* members evaluate
 * the same maps on the imaginary axis with the true delay exp(-jwL).
 */
struct SensitivitySet {
  RationalTF Se;
  RationalTF T;
  RationalTF Sd;
  RationalTF Su;
  double delay = 0.0;
  int npade = 3;
  SoptdModel model;
  PidGains gains;

  Complex exact_loop(double omega) const;
  Complex exact_Se(double omega) const;
  Complex exact_T(double omega) const;
  Complex exact_Sd(double omega) const;
  Complex exact_Su(double omega) const;
};

SensitivitySet sensitivity_set(const SoptdModel& model, const PidGains& gains, int npade = 3);

/// horizon and dt of 0 mean "use the default": 50 (L + T) and min(L, T)/200.
/// npade drives the time-domain realization and the stability test;
/// freq_npade selects the delay model of the frequency-domain metrics
/// (0 = exact exp(-jwL), otherwise that Pade order).
struct SimulationConfig {
  double horizon = 0.0;
  double dt = 0.0;
  int npade = 3;
  int freq_npade = 0;

  SimulationConfig resolved(const SoptdModel& model) const;
};

struct SignalNorms {
  double l2 = 0.0;
  double linf = 0.0;
  /// Weight of the delta at t = 0, excluded from l2 and linf.
  double impulse_weight = 0.0;
};

/// L2 / Linf over [0, horizon] of the step response of H (the impulse
/// response of H/s). H may be improper by one; the resulting delta is
/// reported separately. L2 uses the trapezoid rule on the samples.
SignalNorms step_signal_norms(const RationalTF& h, double dt, double horizon);

/// Step response norms of Su at cfg.npade. Throws numeric_failure if the
/// loop is unstable at that order.
SignalNorms control_signal_norms(const SoptdModel& model, const PidGains& gains, const SimulationConfig& cfg = {});

/// Gain margin is the smallest 1/|L| over all crossings of -180 (mod 360)
/// deg, omega_pc the crossing that attains it. Phase margin is taken at the
/// lowest gain crossover.
struct Margins {
  double gain_margin = 0.0;  // +inf when the phase never reaches -180 deg
  std::optional<double> phase_margin_deg;
  std::optional<double> omega_gc;
  std::optional<double> omega_pc;
};

/// Classical margins of L(s) = loop(s) exp(-delay s). Phase is unwrapped
/// from w -> 0+, starting at its principal value there.
Margins margins(const RationalTF& loop, double delay);
/// freq_npade = 0 uses the exact delay, otherwise the Pade-approximated loop.
Margins margins(const SoptdModel& model, const PidGains& gains, int freq_npade = 0);

/// Continuous phase of loop(jw) exp(-jw delay), as used by margins().
double unwrapped_phase(const RationalTF& loop, double delay, double omega);

inline constexpr std::size_t kMetricCount = 11;
inline constexpr std::array<std::string_view, kMetricCount> kMetricNames{
    "j2_d", "jinf_d", "j2_u", "jinf_u", "j2_n", "jinf_n", "j2_e", "jinf_e", "gm", "phim_deg", "omega_gc"};

struct PerformanceReport {
  double j2_d = 0.0;
  double jinf_d = 0.0;
  double j2_u = 0.0;
  double jinf_u = 0.0;
  double j2_n = 0.0;
  double jinf_n = 0.0;
  double j2_e = 0.0;
  double jinf_e = 0.0;
  double gm = 0.0;
  std::optional<double> phim_deg;
  std::optional<double> omega_gc;
  double u_impulse_weight = 0.0;
  SimulationConfig sim;

  /// The 11 metrics in kMetricNames order; absent or infinite values as NaN.
  std::array<double, kMetricCount> values() const;
};

/**
 * Full metric set. Frequency-domain norms and margins use the delay model
 * picked by cfg.freq_npade (exact by default):
 *   J2d = ||Sd/s||_2   Jinf_d = sup |Sd(jw)/jw|
 *   J2e = ||Se/s||_2   Jinf_e = sup |Se(jw)/jw|
 *   J2n = ||T||_2      Jinf_n = ||T||_inf
 * J2u and Jinf_u come from control_signal_norms. Throws numeric_failure,
 * listing the offending poles, if the loop is unstable at cfg.npade.
 */
PerformanceReport performance_report(const SoptdModel& model, const PidGains& gains, const SimulationConfig& cfg = {});

/// Pearson correlation between metrics across reports. Pairs use only the
/// reports where both values are finite. Undefined entries (fewer than two
/// usable reports, or a constant metric) are NaN.
Eigen::MatrixXd correlation_matrix(const std::vector<PerformanceReport>& reports);

struct InvarianceOrder {
  int order = 0;
  bool stable = false;
  std::vector<Complex> poles;
  Complex dominant{0.0, 0.0};   // rightmost pole with Im >= 0, complex preferred
  double dominant_damping = 0.0;  // -Re/|p|
  SampledSignal setpoint;         // step response of T
  SampledSignal disturbance;      // step response of Sd
  double setpoint_deviation = 0.0;  // max |y_r - y_ref| against the reference order
  double disturbance_deviation = 0.0;
};

struct InvarianceStudy {
  int reference_order = 3;
  std::vector<InvarianceOrder> orders;
  /// Largest relative change of dominant_damping from the reference order
  /// over the stable orders.
  double max_damping_drift = 0.0;
};

/// Step responses and dominant poles of the closed loop at each Pade order.
/// The reference is order 3 when listed, the first listed order otherwise.
/// Unstable orders are flagged and carry no responses (NaN deviations).
InvarianceStudy pade_invariance(const SoptdModel& model, const PidGains& gains, const std::vector<int>& orders,
                                const SimulationConfig& cfg = {});

}  // namespace dpp
