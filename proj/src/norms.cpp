#include "dpp/norms.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dpp/error.hpp"
#include "dpp/placement.hpp"
#include "dpp/state_space.hpp"
#include "linalg.hpp"

namespace dpp {

double h2_norm_quadrature(const FrequencyFn& h, const FrequencyBand& band) {
  if (!(band.lo > 0.0 && band.hi > band.lo)) throw invalid_input("h2 quadrature: bad frequency band");
  if (band.decay < 1) throw invalid_input("h2 quadrature: the response must decay at high frequency");
  using boost::math::quadrature::gauss_kronrod;

  // integrand in u = ln w:  |H(e^u)|^2 e^u
  auto integrand = [&](double u) {
    const double w = std::exp(u);
    return std::norm(h(w)) * w;
  };
  const double ulo = std::log(band.lo);
  const double uhi = std::log(band.hi);
  const double panel = std::log(10.0) / 4.0;
  const auto panels = static_cast<int>(std::ceil((uhi - ulo) / panel));
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = ulo + (uhi - ulo) * i / panels;
    const double b = ulo + (uhi - ulo) * (i + 1) / panels;
    total += gauss_kronrod<double, 31>::integrate(integrand, a, b, 10, 1e-11);
  }
  total += std::norm(h(band.lo)) * band.lo;
  total += std::norm(h(band.hi)) * band.hi / (2.0 * band.decay - 1.0);
  return std::sqrt(total / std::numbers::pi);
}

double hinf_norm_search(const FrequencyFn& h, const FrequencyBand& band, int points, double dc) {
  if (!(band.lo > 0.0 && band.hi > band.lo)) throw invalid_input("hinf search: bad frequency band");
  points = std::max(points, 2000);
  const double llo = std::log(band.lo);
  const double lhi = std::log(band.hi);
  auto at = [&](int i) { return std::exp(llo + (lhi - llo) * i / (points - 1)); };

  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i < points; ++i) {
    const double v = std::abs(h(at(i)));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = std::log(at(std::max(0, best - 1)));
  const double b = std::log(at(std::min(points - 1, best + 1)));
  auto neg = [&](double u) { return -std::abs(h(std::exp(u))); };
  const auto [u, negpeak] = boost::math::tools::brent_find_minima(neg, a, b, 50);
  (void)u;
  return std::max({best_val, -negpeak, std::abs(dc)});
}

FrequencyBand band_for(const RationalTF& sys) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  auto absorb = [&](const Polynomial& p) {
    if (p.degree() < 1) return;
    for (const Complex& r : roots(p)) {
      const double a = std::abs(r);
      if (a == 0.0) continue;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  };
  absorb(sys.den());
  absorb(sys.num());
  if (hi == 0.0) lo = hi = 1.0;
  return {1e-5 * lo, 1e5 * hi, -sys.relative_degree()};
}

void require_stable(const RationalTF& sys, const char* who) {
  if (sys.den().degree() < 1) return;
  const auto poles = roots(sys.den());
  if (!is_stable(poles)) {
    std::ostringstream os;
    os << who << ": system is not stable (max pole real part " << max_real_part(poles) << ")";
    throw numeric_failure(os.str());
  }
}

double h2_norm_lyapunov(const RationalTF& sys) {
  if (!sys.is_strictly_proper()) throw invalid_input("h2_norm: system must be strictly proper");
  require_stable(sys, "h2_norm");
  if (sys.num().is_zero()) return 0.0;
  const StateSpace ss = realize(sys);
  Eigen::MatrixXd a = ss.A;
  Eigen::VectorXd scale;
  balance(a, &scale);
  const Eigen::VectorXd b = ss.B.cwiseQuotient(scale);
  const Eigen::RowVectorXd c = ss.C.cwiseProduct(scale.transpose());
  const Eigen::MatrixXd p = solve_lyapunov(a, b * b.transpose());
  return std::sqrt(std::max(0.0, (c * p * c.transpose())(0, 0)));
}

double h2_norm(const RationalTF& sys, double delay) {
  if (delay < 0.0) throw invalid_input("h2_norm: delay must be non-negative");
  if (!sys.is_strictly_proper()) throw invalid_input("h2_norm: system must be strictly proper (improper or biproper input)");
  require_stable(sys, "h2_norm");
  if (sys.num().is_zero()) return 0.0;
  const FrequencyBand band = band_for(sys);
  const double quad = h2_norm_quadrature([&](double w) { return freq_response(sys, delay, w); }, band);
  const double lyap = h2_norm_lyapunov(sys);
  if (std::abs(quad - lyap) > 1e-6 * std::max(quad, lyap)) {
    std::ostringstream os;
    os.precision(12);
    os << "h2_norm: quadrature " << quad << " and Lyapunov " << lyap << " disagree";
    throw numeric_failure(os.str());
  }
  return quad;
}

double hinf_norm(const RationalTF& sys, double delay) {
  if (delay < 0.0) throw invalid_input("hinf_norm: delay must be non-negative");
  if (!sys.is_proper()) throw invalid_input("hinf_norm: system must be proper");
  require_stable(sys, "hinf_norm");
  if (sys.num().is_zero()) return 0.0;
  if (sys.den().degree() == 0) return std::abs(sys.num()[0] / sys.den()[0]);
  FrequencyBand band = band_for(sys);
  band.lo *= 10.0;
  band.hi /= 10.0;
  return hinf_norm_search([&](double w) { return freq_response(sys, delay, w); }, band, 4000, sys.dc_gain());
}

}  // namespace dpp
