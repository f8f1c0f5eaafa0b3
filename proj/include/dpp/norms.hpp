#pragma once

#include <functional>

#include "dpp/rational.hpp"

namespace dpp {

/// Frequency response H(jw) for w > 0.
using FrequencyFn = std::function<Complex(double)>;

/// Frequency band and asymptotics needed to integrate or search a response.
struct FrequencyBand {
  double lo;  // below lo |H| is treated as flat
  double hi;  // above hi |H| decays like w^-decay
  int decay;  // >= 1 for an H2-integrable tail; 0 allows a flat tail (Hinf only)
};

/**
 * sqrt((1/pi) * integral_0^inf |H(jw)|^2 dw) by adaptive Gauss-Kronrod
 * panels on a logarithmic grid over the band, plus the flat low-frequency
 * tail |H(lo)|^2 lo and the power-law tail |H(hi)|^2 hi / (2 decay - 1).
 */
double h2_norm_quadrature(const FrequencyFn& h, const FrequencyBand& band);

/// Peak of |H(jw)| over a log grid of at least `points` samples in the band,
/// refined by Brent (golden-section) search around the best grid point.
/// `dc` (the w -> 0 value, when finite) joins the candidates.
double hinf_norm_search(const FrequencyFn& h, const FrequencyBand& band, int points = 4000, double dc = 0.0);

/// Band chosen from the pole and zero magnitudes of a rational function
/// (1e-5 x smallest to 1e5 x largest), decay = -relative degree.
FrequencyBand band_for(const RationalTF& sys);

/// H2 norm of H(s) exp(-L s). The delay is all-pass and leaves the value
/// unchanged. Requires H strictly proper and stable. The quadrature value
/// is checked against the Lyapunov value (relative 1e-6) before returning.
double h2_norm(const RationalTF& sys, double delay = 0.0);

/// Lyapunov route: ||H||_2^2 = C P C^T with A P + P A^T + B B^T = 0 on the
/// controllable canonical realization.
double h2_norm_lyapunov(const RationalTF& sys);

/// Hinf norm of H(s) exp(-L s) (delay all-pass). Requires H proper and stable.
double hinf_norm(const RationalTF& sys, double delay = 0.0);

/// Throws numeric_failure unless every pole of sys has Re < -kStabilityMargin.
void require_stable(const RationalTF& sys, const char* who);

}  // namespace dpp
