#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "dpp/plant.hpp"
#include "dpp/polynomial.hpp"

namespace dpp {

/// Desired closed-loop behaviour: dominant pair (zeta_cl, omega_cl), the
/// remaining four poles pushed out by the non-dominance ratio m.
struct DesignSpec {
  double m = 1.0;
  double zeta_cl = 1.0;
  double omega_cl = 1.0;
  void validate() const;
};

enum class PoleType { AllComplex, AllReal, Mixed };
inline constexpr std::array<PoleType, 3> kPoleTypes{PoleType::AllComplex, PoleType::AllReal, PoleType::Mixed};

/// Which power of s (1..4) fixes Kp once Ki and Kd are matched.
enum class KpSource { S1 = 1, S2 = 2, S3 = 3, S4 = 4 };
inline constexpr std::array<KpSource, 4> kKpSources{KpSource::S1, KpSource::S2, KpSource::S3, KpSource::S4};
inline int power_of(KpSource s) { return static_cast<int>(s); }

std::string_view to_string(PoleType t);
std::string_view to_string(KpSource s);
/// Accepts all-complex|all-real|mixed (also "two-complex-two-real").
PoleType parse_pole_type(std::string_view text);
KpSource parse_kp_source(std::string_view text);

/// Parallel-form PID, C(s) = Kp + Ki/s + Kd s. Signs are unconstrained.
struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  bool is_zero() const noexcept { return kp == 0.0 && ki == 0.0 && kd == 0.0; }
  friend bool operator==(const PidGains&, const PidGains&) = default;
};

/// C(s) = (Kd s^2 + Kp s + Ki) / s
RationalTF pid_tf(const PidGains& g);

/**
 * Monic degree-6 polynomial with the dominant pair plus four non-dominant
 * roots, built by multiplying the factors:
 *   AllComplex  (s^2 + 2 m z w s + m^2 w^2)^2
 *   AllReal     (s + m z w)^4
 *   Mixed       (s^2 + 2 m z w s + m^2 w^2)(s + m z w)^2
 * times the dominant factor s^2 + 2 z w s + w^2.
 */
Polynomial desired_charpoly(const DesignSpec& spec, PoleType type);

/// Closed-loop characteristic polynomial of the Pade-3 loop,
///   s D(s) Dp(s) + K (Kd s^2 + Kp s + Ki) Np(s),
/// divided by its leading coefficient L^3.
Polynomial openloop_charpoly(const SoptdModel& model, const PidGains& gains);

/**
 * Gains by coefficient matching against desired_charpoly: Ki from s^0,
 * Kd from s^5, then Kp from the single linear equation at s^k, k = src.
 * Always designed against Pade order 3.
 */
PidGains solve_gains(const SoptdModel& model, const DesignSpec& spec, PoleType type, KpSource src);

/// All four Kp variants for one design point (Ki and Kd are shared).
std::array<PidGains, 4> solve_all_sources(const SoptdModel& model, const DesignSpec& spec, PoleType type);

/// Closed-loop poles with the delay replaced by pade_tf(npade, L):
/// npade + 3 roots. Throws for npade < 1 or an all-zero controller.
std::vector<Complex> closedloop_poles(const SoptdModel& model, const PidGains& gains, int npade = 3);

/// Stability margin: a pole counts as stable only if Re < -kStabilityMargin.
inline constexpr double kStabilityMargin = 1e-9;

double max_real_part(const std::vector<Complex>& poles);
/// True iff every pole has Re < -kStabilityMargin. Throws on an empty list.
bool is_stable(const std::vector<Complex>& poles);

}  // namespace dpp
